#include "squidflux/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

namespace squidflux {

namespace {

using State = std::array<double, 2>;  // {x, dx/dtau}

// Pulse converted to tau units once, ahead of integration.
struct PulseTau {
    double amp = 0.0;
    double start = 0.0;
    double ramp_up_end = 0.0;
    double ramp_down_begin = 0.0;
    double end = 0.0;
    double rise = 0.0;

    [[nodiscard]] double value(double tau) const {
        if (amp == 0.0 || tau <= start || tau >= end) return 0.0;
        if (rise > 0.0 && tau < ramp_up_end) return amp * (tau - start) / rise;
        if (rise > 0.0 && tau > ramp_down_begin) return amp * (end - tau) / rise;
        return amp;
    }
};

struct Rcsj {
    double alpha;
    double beta;
    double base_xe;
    PulseTau pulse;

    [[nodiscard]] double xe_at(double tau) const { return base_xe + pulse.value(tau); }

    void operator()(const State& s, State& dsdt, double tau) const {
        dsdt[0] = s[1];
        dsdt[1] = -beta * s[1] - alpha * sin2pi(s[0]) + (xe_at(tau) - s[0]);
    }
};

using DenseStepper = boost::numeric::odeint::result_of::make_dense_output<
    boost::numeric::odeint::runge_kutta_dopri5<State>>::type;

// Adaptive integration with interpolated sampling on a fixed grid. The
// on_sample callback may return true to stop early.
class Engine {
public:
    Engine(const Rcsj& sys, double x0, double v0, const IntegratorControls& ctl)
        : sys_(sys),
          stepper_(boost::numeric::odeint::make_dense_output(
              ctl.abs_tol, ctl.rel_tol, boost::numeric::odeint::runge_kutta_dopri5<State>())),
          state_{x0, v0},
          ctl_(ctl) {
        stepper_.initialize(state_, 0.0, 0.01);
        next_sample_ = 0.0;
    }

    [[nodiscard]] double time() const { return t_; }
    [[nodiscard]] const State& state() const { return state_; }

    template <typename F>
    bool run_to(double target, F&& on_sample) {
        // Integrate piecewise between pulse corners so the stepper never
        // straddles a slope discontinuity.
        std::array<double, 4> corners{sys_.pulse.start, sys_.pulse.ramp_up_end,
                                      sys_.pulse.ramp_down_begin, sys_.pulse.end};
        double seg_start = t_;
        for (double c : corners) {
            if (c > seg_start && c < target) {
                if (run_segment(c, on_sample)) return true;
                seg_start = c;
            }
        }
        return run_segment(target, on_sample);
    }

private:
    template <typename F>
    bool run_segment(double target, F&& on_sample) {
        if (t_ >= target) return false;
        stepper_.initialize(state_, t_, std::min(0.01, target - t_));
        while (stepper_.current_time() < target) {
            stepper_.do_step(sys_);
            const auto& cur = stepper_.current_state();
            if (!std::isfinite(cur[0]) || !std::isfinite(cur[1])) {
                throw std::runtime_error("dynamics: integration diverged to a non-finite state");
            }
            const double reach = std::min(stepper_.current_time(), target);
            while (next_sample_ <= reach) {
                State s;
                stepper_.calc_state(next_sample_, s);
                if (on_sample(next_sample_, s)) {
                    stepper_.calc_state(next_sample_, state_);
                    t_ = next_sample_;
                    next_sample_ += ctl_.sample_dt;
                    return true;
                }
                next_sample_ += ctl_.sample_dt;
            }
        }
        stepper_.calc_state(target, state_);
        t_ = target;
        return false;
    }

    Rcsj sys_;
    DenseStepper stepper_;
    State state_;
    IntegratorControls ctl_;
    double t_ = 0.0;
    double next_sample_ = 0.0;
};

PulseTau to_tau(const FluxPulse& pulse, double tau0) {
    pulse.validate();
    PulseTau pt;
    pt.amp = pulse.amplitude;
    pt.start = pulse.start / tau0;
    pt.rise = pulse.rise_time / tau0;
    pt.end = (pulse.start + pulse.duration) / tau0;
    pt.ramp_up_end = pt.start + pt.rise;
    pt.ramp_down_begin = pt.end - pt.rise;
    return pt;
}

// Tracks how long the state has been resting inside a well.
class SettleTracker {
public:
    SettleTracker(const DerivedParams& d, double base_xe, const IntegratorControls& ctl)
        : d_(d), base_xe_(base_xe), ctl_(ctl) {}

    bool update(double tau, double x, double v) {
        if (std::abs(v) < ctl_.settle_velocity && near_well(x)) {
            if (!(dwell_begin_ >= 0.0)) dwell_begin_ = tau;
            if (tau - dwell_begin_ >= ctl_.settle_dwell) settled_ = true;
        } else {
            dwell_begin_ = -1.0;
        }
        return settled_;
    }

    [[nodiscard]] bool settled() const { return settled_; }

private:
    bool near_well(double x) {
        const int n = static_cast<int>(std::lround(x));
        auto it = wells_.find(n);
        if (it == wells_.end()) {
            double flux = std::numeric_limits<double>::quiet_NaN();
            try {
                flux = well_flux(n, base_xe_, d_);
            } catch (const std::domain_error&) {
            }
            it = wells_.emplace(n, flux).first;
        }
        return std::isfinite(it->second) && std::abs(x - it->second) < ctl_.settle_distance;
    }

    DerivedParams d_;
    double base_xe_;
    IntegratorControls ctl_;
    std::map<int, double> wells_;
    double dwell_begin_ = -1.0;
    bool settled_ = false;
};

// Shared driver: pulse plus ring-down until settled or the horizon.
struct RunOutcome {
    double x;
    double v;
    bool settled;
};

RunOutcome run_until_settled(const DerivedParams& d, double x0, double v0,
                             const FluxPulse& pulse, const IntegratorControls& ctl,
                             double base_xe, Trajectory* traj) {
    Rcsj sys{d.alpha(), d.beta, base_xe, to_tau(pulse, d.tau0)};
    Engine engine(sys, x0, v0, ctl);
    SettleTracker tracker(d, base_xe, ctl);

    auto record = [&](double tau, const State& s) {
        if (traj) {
            traj->tau.push_back(tau);
            traj->x.push_back(s[0]);
            traj->dxdtau.push_back(s[1]);
            traj->xe.push_back(sys.xe_at(tau));
        }
    };

    const double pulse_end = std::max(sys.pulse.end, 0.0);
    engine.run_to(pulse_end, [&](double tau, const State& s) {
        record(tau, s);
        return false;
    });
    const bool stopped = engine.run_to(std::max(ctl.max_horizon, pulse_end), [&](double tau, const State& s) {
        record(tau, s);
        return tracker.update(tau, s[0], s[1]);
    });
    (void)stopped;
    return {engine.state()[0], engine.state()[1], tracker.settled()};
}

}  // namespace

void FluxPulse::validate() const {
    if (!(duration > 0.0)) {
        throw std::invalid_argument("FluxPulse: duration must be > 0");
    }
    if (rise_time < 0.0 || rise_time > duration / 2.0) {
        throw std::invalid_argument("FluxPulse: need 0 <= rise_time <= duration/2");
    }
}

double FluxPulse::value(double t) const {
    if (t <= start || t >= start + duration) return 0.0;
    if (rise_time > 0.0 && t < start + rise_time) return amplitude * (t - start) / rise_time;
    if (rise_time > 0.0 && t > start + duration - rise_time) {
        return amplitude * (start + duration - t) / rise_time;
    }
    return amplitude;
}

FluxPulse make_pulse_tau(const DerivedParams& d, double amplitude, double duration_tau,
                         double rise_tau, double start_tau) {
    FluxPulse pulse;
    pulse.amplitude = amplitude;
    pulse.duration = duration_tau * d.tau0;
    pulse.rise_time = rise_tau * d.tau0;
    pulse.start = start_tau * d.tau0;
    pulse.validate();
    return pulse;
}

Trajectory integrate(const SquidParams& p, double x0, double v0, const FluxPulse& drive,
                     double horizon, const IntegratorControls& ctl, double base_xe) {
    const DerivedParams d = derive_params(p);
    drive.validate();
    Rcsj sys{d.alpha(), d.beta, base_xe, to_tau(drive, d.tau0)};
    Engine engine(sys, x0, v0, ctl);
    Trajectory traj;
    engine.run_to(horizon / d.tau0, [&](double tau, const State& s) {
        traj.tau.push_back(tau);
        traj.x.push_back(s[0]);
        traj.dxdtau.push_back(s[1]);
        traj.xe.push_back(sys.xe_at(tau));
        return false;
    });
    return traj;
}

TransitionResult pulse_transition(const SquidParams& p, int start_well, const FluxPulse& pulse,
                                  const IntegratorControls& ctl, double base_xe) {
    const DerivedParams d = derive_params(p);
    const double x0 = well_flux(start_well, base_xe, d);

    TransitionResult result;
    result.initial_index = start_well;
    result.initial_flux = x0;

    Trajectory traj;
    const RunOutcome out =
        run_until_settled(d, x0, 0.0, pulse, ctl, base_xe, ctl.keep_trajectory ? &traj : nullptr);

    result.settled = out.settled;
    const auto landing = nearest_well(out.x, base_xe, p);
    if (landing) {
        result.final_index = landing->index;
        result.final_flux = out.settled ? landing->flux : out.x;
    } else {
        result.final_index = static_cast<int>(std::lround(out.x));
        result.final_flux = out.x;
    }
    result.delta_phi = result.final_flux - result.initial_flux;
    if (ctl.keep_trajectory) result.trajectory = std::move(traj);
    return result;
}

SweepResult transition_sweep(const SquidParams& p, int start_well,
                             const std::vector<double>& amplitudes, const IntegratorControls& ctl,
                             double base_xe) {
    const DerivedParams d = derive_params(p);
    SweepResult sweep;
    sweep.amplitudes = amplitudes;
    sweep.transitions.reserve(amplitudes.size());

    IntegratorControls run_ctl = ctl;
    run_ctl.keep_trajectory = false;

    std::vector<double> supra_amp;
    std::vector<double> supra_dphi;
    for (double amp : amplitudes) {
        const FluxPulse pulse = make_pulse_tau(d, amp, 400.0, 5.0, 5.0);
        TransitionResult tr = pulse_transition(p, start_well, pulse, run_ctl, base_xe);
        const int sign = amp >= 0.0 ? 1 : -1;
        // Commanded-amplitude threshold: the branch folds when base_xe + amp
        // crosses the exact critical flux.
        const double commanded_thr = critical_threshold(start_well, d, sign).exact - base_xe;
        const bool supra = sign > 0 ? amp > commanded_thr : amp < commanded_thr;
        if (supra) {
            supra_amp.push_back(amp);
            supra_dphi.push_back(tr.delta_phi);
        }
        sweep.transitions.push_back(std::move(tr));
    }
    if (supra_amp.size() < 2) {
        throw std::runtime_error("transition_sweep: fit undefined, fewer than two amplitudes "
                                 "exceed the start well's threshold");
    }
    sweep.fit = fit_line(supra_amp, supra_dphi);
    return sweep;
}

JumpPolicy damping_jump_policy(const SquidParams& p, const IntegratorControls& ctl) {
    const DerivedParams d = derive_params(p);
    IntegratorControls run_ctl = ctl;
    run_ctl.keep_trajectory = false;
    return [p, d, run_ctl](int n, double xe_eff, int direction) {
        // Release the state just past the fold of branch n and let it relax.
        const double dstar = std::acos(-1.0 / d.beta_e) / kTwoPi;
        const double x0 = n + direction * dstar;
        FluxPulse none;
        none.amplitude = 0.0;
        none.duration = d.tau0;
        none.rise_time = 0.0;
        const RunOutcome out = run_until_settled(d, x0, 0.0, none, run_ctl, xe_eff, nullptr);
        const auto landing = nearest_well(out.x, xe_eff, p);
        return landing ? landing->index : static_cast<int>(std::lround(out.x));
    };
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::runtime_error("fit_line: need at least two points");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        throw std::runtime_error("fit_line: degenerate abscissa");
    }
    LinearFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.points = static_cast<int>(x.size());
    return fit;
}

}  // namespace squidflux
