#pragma once

#include <optional>
#include <vector>

#include "squidflux/statics.hpp"

namespace squidflux {

// Pulse-driven RCSJ dynamics in dimensionless time tau = t/sqrt(LC):
//
//     x'' = -beta x' - alpha sin(2 pi x) + (xe(tau) - x)
//
// with x the total flux in phi0 units and xe(tau) the applied flux.

/// Square external-flux pulse with linear edges. Times in seconds,
/// amplitude in phi0 (signed).
struct FluxPulse {
    double amplitude;
    double duration;       // full base width, s
    double rise_time;      // per edge, s; 0 <= rise_time <= duration/2
    double start = 0.0;    // s

    void validate() const;
    [[nodiscard]] double value(double t) const;  // applied flux at time t, phi0
    [[nodiscard]] double end() const { return start + duration; }
};

/// Convenience constructor with times given in tau units of the circuit.
[[nodiscard]] FluxPulse make_pulse_tau(const DerivedParams& d, double amplitude,
                                       double duration_tau, double rise_tau,
                                       double start_tau = 0.0);

struct Trajectory {
    std::vector<double> tau;     // units of sqrt(LC)
    std::vector<double> x;       // phi0
    std::vector<double> dxdtau;
    std::vector<double> xe;     // applied flux at each sample, phi0
};

struct IntegratorControls {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double sample_dt = 0.1;         // tau between recorded samples
    double settle_velocity = 1e-6;  // |dx/dtau| bound
    double settle_distance = 1e-3;  // distance to a well, phi0
    double settle_dwell = 100.0;    // tau the settle condition must hold
    double max_horizon = 40000.0;   // tau, ring-down search cutoff
    bool keep_trajectory = true;
};

struct TransitionResult {
    int initial_index;
    int final_index;
    double initial_flux;  // phi0
    double final_flux;    // phi0
    double delta_phi;     // phi0
    bool settled;
    std::optional<Trajectory> trajectory;
};

/// Integrates the pulse-driven equation from (x0, v0) over [0, horizon]
/// seconds. base_xe is a constant applied flux on top of the pulse.
/// Throws std::runtime_error if the state becomes non-finite.
[[nodiscard]] Trajectory integrate(const SquidParams& p, double x0, double v0,
                                   const FluxPulse& drive, double horizon,
                                   const IntegratorControls& ctl = {}, double base_xe = 0.0);

/// Prepares the exact flux of start_well (at base_xe), runs the pulse plus
/// ring-down, and classifies the final state by the nearest stable well.
/// Not settling within ctl.max_horizon is reported, not thrown.
[[nodiscard]] TransitionResult pulse_transition(const SquidParams& p, int start_well,
                                                const FluxPulse& pulse,
                                                const IntegratorControls& ctl = {},
                                                double base_xe = 0.0);

struct LinearFit {
    double slope;
    double intercept;
    int points;
};

struct SweepResult {
    std::vector<double> amplitudes;          // phi0
    std::vector<TransitionResult> transitions;
    LinearFit fit;  // delta_phi vs amplitude over supra-threshold points
};

/// Runs pulse_transition for each amplitude (default pulse shape) and fits
/// the flux transition against amplitude. Throws std::runtime_error when
/// fewer than two amplitudes exceed the start well's threshold.
[[nodiscard]] SweepResult transition_sweep(const SquidParams& p, int start_well,
                                           const std::vector<double>& amplitudes,
                                           const IntegratorControls& ctl = {},
                                           double base_xe = 0.0);

/// Jump policy for statics::hysteresis_curve resolved by damped relaxation
/// from the destabilized fold.
[[nodiscard]] JumpPolicy damping_jump_policy(const SquidParams& p,
                                             const IntegratorControls& ctl = {});

/// Least-squares line through (x, y); requires at least two points.
[[nodiscard]] LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace squidflux
