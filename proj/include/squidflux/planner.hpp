#pragma once

#include <optional>
#include <string>
#include <vector>

#include "squidflux/dynamics.hpp"

namespace squidflux {

// Pulse-sequence planning between metastable wells. Amplitude windows come
// from the static thresholds: from any well, a single pulse with amplitude in
// [n_f - 1 + (alpha + 1/4), n_f + (alpha + 1/4)) lands an over/critically
// damped SQUID on well n_f (mirrored for the negative direction). An
// underdamped SQUID overshoots by a fixed, calibrated number of wells per
// threshold crossing, which a two-pulse detour cancels.

struct PlanConfig {
    double env_offset = 0.0;  // phi0, constant environmental flux (added by the environment)
    double precomp = 0.0;     // phi0, extra commanded amplitude against line loss, >= 0
    double basic_transition = 0.0;  // phi0, calibrated underdamped per-pulse jump (positive pulses)
    std::optional<double> basic_transition_negative;  // defaults to the positive magnitude
    double pulse_duration_tau = 400.0;
    double pulse_rise_tau = 5.0;

    void validate() const;
    [[nodiscard]] int jump_pos() const;  // basic transition in wells, positive pulses
    [[nodiscard]] int jump_neg() const;  // idem for negative pulses (magnitude)
};

struct PlannedPulse {
    double amplitude;      // phi0, commanded (midpoint + precomp - env_offset)
    double window_lo;      // phi0, raw validity window before precomp/env
    double window_hi;
    int predicted_index;   // well index expected after this pulse
};

enum class PlanStrategy { SinglePulse, TwoPulseUnderdamped };

struct PulsePlan {
    PlanStrategy strategy;
    int initial_index;
    int target_index;
    std::vector<PlannedPulse> pulses;  // empty when target == initial
    double duration_tau;
    double rise_tau;
};

/// Single-pulse plan, valid for beta/beta_c >= 1.
[[nodiscard]] PulsePlan plan_overdamped(int n_i, int n_f, const SquidParams& p,
                                        const PlanConfig& cfg);

/// Two-pulse plan for beta/beta_c < 1; needs a calibrated basic transition.
[[nodiscard]] PulsePlan plan_underdamped(int n_i, int n_f, const SquidParams& p,
                                         const PlanConfig& cfg);

struct CalibrationOptions {
    double epsilon = 0.5;         // phi0 above the probe well's threshold
    int sweep_points = 5;
    double amplitude_loss = 0.0;  // phi0 removed from each delivered amplitude
    IntegratorControls controls{};
};

struct CalibrationResult {
    bool calibrated;
    double basic_transition;  // phi0; 0 when not calibrated
    LinearFit fit;            // delta-phi vs commanded amplitude, both relative
    std::vector<double> sweep_amplitude;  // commanded minus lossless critical, phi0
    std::vector<double> sweep_delta;      // transition minus basic transition, phi0
};

/// Measures the underdamped basic transition by probing the given well just
/// above threshold, plus the linear transition law from a short sweep.
[[nodiscard]] CalibrationResult calibrate_basic_transition(const SquidParams& p, int probe_well,
                                                           const CalibrationOptions& opts = {});

struct VerifyResult {
    bool reached;
    int achieved_index;
    std::vector<int> path;  // well after each executed pulse
};

/// Executes the plan through the dynamics module, with cfg.env_offset as the
/// constant background flux and an optional line loss shaving the delivered
/// amplitude magnitude, and reports the achieved well.
[[nodiscard]] VerifyResult verify_plan(const PulsePlan& plan, const SquidParams& p,
                                       const PlanConfig& cfg, const IntegratorControls& ctl = {},
                                       double line_loss = 0.0);

[[nodiscard]] std::string plan_to_json(const PulsePlan& plan, const DerivedParams& d);
[[nodiscard]] PulsePlan plan_from_json(const std::string& text, const DerivedParams& d);

}  // namespace squidflux
