#include "squidflux/planner.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace squidflux {

namespace {

int sign_of(double v) { return v >= 0.0 ? 1 : -1; }

double emitted_amplitude(double midpoint, const PlanConfig& cfg) {
    // Precompensation enlarges the commanded magnitude; the environment adds
    // its constant offset on top of whatever is commanded, so it is removed.
    return midpoint + sign_of(midpoint) * cfg.precomp - cfg.env_offset;
}

void check_index_range(int n, int nmax, const char* what) {
    if (std::abs(n) > nmax) {
        throw std::out_of_range(std::string(what) + " index out of the well range");
    }
}

PlannedPulse positive_pulse(int from, int k, int predicted, double t, const PlanConfig& cfg) {
    PlannedPulse pulse;
    pulse.window_lo = from + t + k;
    pulse.window_hi = from + t + k + 1.0;
    pulse.predicted_index = predicted;
    pulse.amplitude = emitted_amplitude(0.5 * (pulse.window_lo + pulse.window_hi), cfg);
    return pulse;
}

PlannedPulse negative_pulse(int from, int k, int predicted, double t, const PlanConfig& cfg) {
    PlannedPulse pulse;
    pulse.window_lo = from - t - k - 1.0;
    pulse.window_hi = from - t - k;
    pulse.predicted_index = predicted;
    pulse.amplitude = emitted_amplitude(0.5 * (pulse.window_lo + pulse.window_hi), cfg);
    return pulse;
}

// Appends a hop sequence from -> to using the two-pulse underdamped scheme,
// recursing through an intermediate well when a detour leaves the well range.
void plan_hops(int from, int to, int nmax, double t, const PlanConfig& cfg,
               std::vector<PlannedPulse>& out, int budget) {
    if (from == to) return;
    if (static_cast<int>(out.size()) + 2 > budget) {
        throw std::runtime_error("plan_underdamped: no pulse sequence within the pulse budget");
    }
    const int jp = cfg.jump_pos();
    const int jn = cfg.jump_neg();

    if (to > from) {
        const int detour_down = from - jn;
        if (detour_down >= -nmax && to - detour_down - jp >= 0) {
            out.push_back(negative_pulse(from, 0, detour_down, t, cfg));
            out.push_back(positive_pulse(detour_down, to - detour_down - jp, to, t, cfg));
            return;
        }
        const int detour_up = to + jp;
        if (detour_up <= nmax && detour_up - to - jn == 0) {
            out.push_back(positive_pulse(from, detour_up - from - jp, detour_up, t, cfg));
            out.push_back(negative_pulse(detour_up, 0, to, t, cfg));
            return;
        }
        const int mid = nmax - jp;
        if (mid > from && mid < to + jp) {
            plan_hops(from, mid, nmax, t, cfg, out, budget);
            plan_hops(mid, to, nmax, t, cfg, out, budget);
            return;
        }
    } else {
        const int detour_up = from + jp;
        if (detour_up <= nmax && detour_up - to - jn >= 0) {
            out.push_back(positive_pulse(from, 0, detour_up, t, cfg));
            out.push_back(negative_pulse(detour_up, detour_up - to - jn, to, t, cfg));
            return;
        }
        const int detour_down = to - jn;
        if (detour_down >= -nmax && detour_down + jp - to == 0) {
            out.push_back(negative_pulse(from, from - detour_down - jn, detour_down, t, cfg));
            out.push_back(positive_pulse(detour_down, 0, to, t, cfg));
            return;
        }
        const int mid = -nmax + jn;
        if (mid < from && mid > to - jn) {
            plan_hops(from, mid, nmax, t, cfg, out, budget);
            plan_hops(mid, to, nmax, t, cfg, out, budget);
            return;
        }
    }
    throw std::runtime_error("plan_underdamped: target unreachable with the calibrated "
                             "basic transition");
}

}  // namespace

void PlanConfig::validate() const {
    if (precomp < 0.0) {
        throw std::invalid_argument("PlanConfig: precomp must be >= 0");
    }
}

int PlanConfig::jump_pos() const {
    return static_cast<int>(std::lround(std::abs(basic_transition)));
}

int PlanConfig::jump_neg() const {
    if (basic_transition_negative) {
        return static_cast<int>(std::lround(std::abs(*basic_transition_negative)));
    }
    return jump_pos();
}

PulsePlan plan_overdamped(int n_i, int n_f, const SquidParams& p, const PlanConfig& cfg) {
    cfg.validate();
    const DerivedParams d = derive_params(p);
    if (classify_damping(d).underdamped()) {
        throw std::invalid_argument("plan_overdamped: requires beta/beta_c >= 1");
    }
    const int nmax = max_census_index(d);
    check_index_range(n_i, nmax, "plan_overdamped: initial");
    check_index_range(n_f, nmax, "plan_overdamped: target");

    PulsePlan plan;
    plan.strategy = PlanStrategy::SinglePulse;
    plan.initial_index = n_i;
    plan.target_index = n_f;
    plan.duration_tau = cfg.pulse_duration_tau;
    plan.rise_tau = cfg.pulse_rise_tau;
    if (n_f == n_i) return plan;

    const double t = d.alpha() + 0.25;
    PlannedPulse pulse;
    if (n_f > n_i) {
        pulse.window_lo = n_f - 1.0 + t;
        pulse.window_hi = n_f + t;
    } else {
        pulse.window_lo = n_f - t;
        pulse.window_hi = n_f + 1.0 - t;
    }
    pulse.predicted_index = n_f;
    pulse.amplitude = emitted_amplitude(0.5 * (pulse.window_lo + pulse.window_hi), cfg);
    plan.pulses.push_back(pulse);
    return plan;
}

PulsePlan plan_underdamped(int n_i, int n_f, const SquidParams& p, const PlanConfig& cfg) {
    cfg.validate();
    const DerivedParams d = derive_params(p);
    if (!classify_damping(d).underdamped()) {
        throw std::invalid_argument("plan_underdamped: requires beta/beta_c < 1");
    }
    const int nmax = max_census_index(d);
    check_index_range(n_i, nmax, "plan_underdamped: initial");
    check_index_range(n_f, nmax, "plan_underdamped: target");

    PulsePlan plan;
    plan.strategy = PlanStrategy::TwoPulseUnderdamped;
    plan.initial_index = n_i;
    plan.target_index = n_f;
    plan.duration_tau = cfg.pulse_duration_tau;
    plan.rise_tau = cfg.pulse_rise_tau;
    if (n_f == n_i) return plan;

    if (cfg.jump_pos() < 1 || cfg.jump_neg() < 1) {
        throw std::invalid_argument("plan_underdamped: basic transition not calibrated");
    }
    // "Several single pulses": two per hop, at most five pulses in total.
    plan_hops(n_i, n_f, nmax, d.alpha() + 0.25, cfg, plan.pulses, 5);
    return plan;
}

CalibrationResult calibrate_basic_transition(const SquidParams& p, int probe_well,
                                             const CalibrationOptions& opts) {
    const DerivedParams d = derive_params(p);
    if (!classify_damping(d).underdamped()) {
        throw std::invalid_argument("calibrate_basic_transition: requires beta/beta_c < 1");
    }
    const double thr = critical_threshold(probe_well, d, +1).exact;

    IntegratorControls ctl = opts.controls;
    ctl.keep_trajectory = false;

    auto run_commanded = [&](double commanded) {
        const double delivered = commanded - opts.amplitude_loss;
        const FluxPulse pulse = make_pulse_tau(d, delivered, 400.0, 5.0, 5.0);
        return pulse_transition(p, probe_well, pulse, ctl);
    };

    CalibrationResult result;
    result.fit = {0.0, 0.0, 0};

    // The observed critical commanded amplitude: delivery first crosses the
    // fold once the line loss is made up.
    const double commanded_critical = thr + opts.amplitude_loss;
    const TransitionResult probe = run_commanded(commanded_critical + opts.epsilon);
    result.basic_transition = probe.delta_phi;
    result.calibrated = probe.final_index != probe.initial_index;
    if (!result.calibrated) {
        result.basic_transition = 0.0;
        return result;
    }

    // Short sweep above the observed critical amplitude; the fit is taken
    // against the lossless prediction, so line loss shows up as a negative
    // intercept exactly as a lossy setup would.
    for (int j = 0; j < std::max(opts.sweep_points, 2); ++j) {
        const double commanded = commanded_critical + opts.epsilon + j;
        const TransitionResult tr = (j == 0) ? probe : run_commanded(commanded);
        result.sweep_amplitude.push_back(commanded - (thr + opts.epsilon));
        result.sweep_delta.push_back(tr.delta_phi - result.basic_transition);
    }
    result.fit = fit_line(result.sweep_amplitude, result.sweep_delta);
    return result;
}

VerifyResult verify_plan(const PulsePlan& plan, const SquidParams& p, const PlanConfig& cfg,
                         const IntegratorControls& ctl, double line_loss) {
    const DerivedParams d = derive_params(p);
    VerifyResult vr;
    vr.achieved_index = plan.initial_index;
    if (plan.pulses.empty()) {
        vr.reached = plan.target_index == plan.initial_index;
        return vr;
    }
    IntegratorControls run_ctl = ctl;
    run_ctl.keep_trajectory = false;

    int state = plan.initial_index;
    for (const PlannedPulse& pulse : plan.pulses) {
        const double delivered = pulse.amplitude - sign_of(pulse.amplitude) * line_loss;
        const FluxPulse drive =
            make_pulse_tau(d, delivered, plan.duration_tau, plan.rise_tau, 5.0);
        const TransitionResult tr =
            pulse_transition(p, state, drive, run_ctl, cfg.env_offset);
        state = tr.final_index;
        vr.path.push_back(state);
    }
    vr.achieved_index = state;
    vr.reached = state == plan.target_index;
    return vr;
}

std::string plan_to_json(const PulsePlan& plan, const DerivedParams& d) {
    nlohmann::ordered_json j;
    j["strategy"] = plan.strategy == PlanStrategy::SinglePulse ? "single-pulse"
                                                               : "two-pulse-underdamped";
    j["initial_index"] = plan.initial_index;
    j["target_index"] = plan.target_index;
    j["pulses"] = nlohmann::ordered_json::array();
    for (const PlannedPulse& pulse : plan.pulses) {
        nlohmann::ordered_json pj;
        pj["amplitude_phi0"] = pulse.amplitude;
        pj["duration_ns"] = plan.duration_tau * d.tau0 * 1e9;
        pj["rise_ns"] = plan.rise_tau * d.tau0 * 1e9;
        pj["window_lo_phi0"] = pulse.window_lo;
        pj["window_hi_phi0"] = pulse.window_hi;
        pj["predicted_well"] = pulse.predicted_index;
        j["pulses"].push_back(pj);
    }
    return j.dump(2) + "\n";
}

PulsePlan plan_from_json(const std::string& text, const DerivedParams& d) {
    const auto j = nlohmann::json::parse(text);
    PulsePlan plan;
    plan.strategy = j.at("strategy").get<std::string>() == "single-pulse"
                        ? PlanStrategy::SinglePulse
                        : PlanStrategy::TwoPulseUnderdamped;
    plan.initial_index = j.at("initial_index").get<int>();
    plan.target_index = j.at("target_index").get<int>();
    plan.duration_tau = 400.0;
    plan.rise_tau = 5.0;
    for (const auto& pj : j.at("pulses")) {
        PlannedPulse pulse;
        pulse.amplitude = pj.at("amplitude_phi0").get<double>();
        pulse.window_lo = pj.value("window_lo_phi0", pulse.amplitude - 0.5);
        pulse.window_hi = pj.value("window_hi_phi0", pulse.amplitude + 0.5);
        pulse.predicted_index = pj.value("predicted_well", plan.target_index);
        plan.duration_tau = pj.at("duration_ns").get<double>() * 1e-9 / d.tau0;
        plan.rise_tau = pj.at("rise_ns").get<double>() * 1e-9 / d.tau0;
        plan.pulses.push_back(pulse);
    }
    return plan;
}

}  // namespace squidflux
