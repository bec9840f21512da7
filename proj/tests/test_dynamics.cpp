#include <doctest.h>

#include <cmath>

#include "squidflux/dynamics.hpp"
#include "support/oracles.hpp"

using namespace squidflux;

namespace {

SquidParams fig_params(double ratio) {
    const double ic = 100e-6, l = 1e-9, c = 2e-12;
    return {ic, l, c, shunt_for_damping_ratio(ic, l, c, ratio)};
}

// Final well of the reference underdamped case (ratio 0.3, amplitude
// 49.4 phi0, from well 0), frozen from the fixed-step oracle.
constexpr int kGoldenFinalRatio03 = 29;

}  // namespace

TEST_CASE("zero drive holds the equilibrium") {
    const SquidParams p = fig_params(1.0);
    const DerivedParams d = derive_params(p);
    const double x0 = well_flux(5, 0.0, d);
    const FluxPulse none = make_pulse_tau(d, 0.0, 50.0, 5.0, 5.0);
    const Trajectory traj = integrate(p, x0, 0.0, none, 200.0 * d.tau0);
    for (double x : traj.x) {
        CHECK(x == doctest::Approx(x0).epsilon(1e-10));
    }
}

TEST_CASE("single pulse lands the adjacent well when critically damped or above") {
    for (double ratio : {1.0, 2.0}) {
        const SquidParams p = fig_params(ratio);
        const DerivedParams d = derive_params(p);
        const FluxPulse pulse = make_pulse_tau(d, 49.4, 300.0, 5.0, 5.0);
        const TransitionResult tr = pulse_transition(p, 0, pulse);
        CHECK(tr.settled);
        CHECK(tr.final_index == 1);
    }
}

TEST_CASE("underdamped pulse overshoots to the golden well") {
    const SquidParams p = fig_params(0.3);
    const DerivedParams d = derive_params(p);

    const FluxPulse pulse = make_pulse_tau(d, 49.4, 300.0, 5.0, 5.0);
    const TransitionResult tr = pulse_transition(p, 0, pulse);
    CHECK(tr.settled);
    CHECK(tr.final_index == kGoldenFinalRatio03);
    CHECK(tr.final_index > 1);

    // Independent fixed-step oracle agrees with the adaptive run.
    const auto ref = oracle::rk4_pulse(d.alpha(), d.beta, tr.initial_flux, 0.0, 49.4, 5.0,
                                       300.0, 5.0, 450.0);
    CHECK(std::lround(ref.x) == kGoldenFinalRatio03);
    CHECK(tr.final_flux == doctest::Approx(ref.x).epsilon(1e-6));
}

TEST_CASE("sub-threshold pulse does nothing") {
    const SquidParams p = fig_params(1.0);
    const DerivedParams d = derive_params(p);
    const FluxPulse pulse = make_pulse_tau(d, 40.0, 300.0, 5.0, 5.0);
    const TransitionResult tr = pulse_transition(p, 0, pulse);
    CHECK(tr.settled);
    CHECK(tr.final_index == 0);
    CHECK(tr.delta_phi == 0.0);
}

TEST_CASE("critical and overdamped sweeps share every final well") {
    const SquidParams p1 = fig_params(1.0);
    const SquidParams p2 = fig_params(2.0);
    const DerivedParams d = derive_params(p1);
    std::vector<double> amps;
    for (int n = 1; n <= 10; ++n) amps.push_back(d.alpha() + n);
    const SweepResult s1 = transition_sweep(p1, 0, amps);
    const SweepResult s2 = transition_sweep(p2, 0, amps);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        CHECK(s1.transitions[i].final_index == static_cast<int>(i) + 1);
        CHECK(s1.transitions[i].final_index == s2.transitions[i].final_index);
    }
}

TEST_CASE("transition slope is unity across damping regimes") {
    for (double ratio : {0.3, 1.0}) {
        const SquidParams p = fig_params(ratio);
        const DerivedParams d = derive_params(p);
        std::vector<double> amps;
        for (int n = 0; n <= 10; ++n) amps.push_back(d.alpha() + n);
        const SweepResult sweep = transition_sweep(p, 0, amps);
        CHECK(std::abs(sweep.fit.slope - 1.0) < 0.01);
        CHECK(sweep.fit.points == 10);  // the n = 0 point is sub-threshold
    }
}

TEST_CASE("all-sub-threshold sweep leaves the fit undefined") {
    const SquidParams p = fig_params(1.0);
    CHECK_THROWS_AS(transition_sweep(p, 0, {10.0, 20.0, 30.0}), std::runtime_error);
}

TEST_CASE("slope is insensitive to the integrator tolerance") {
    const SquidParams p = fig_params(0.5);
    const DerivedParams d = derive_params(p);
    std::vector<double> amps;
    for (int n = 1; n <= 6; ++n) amps.push_back(d.alpha() + n);

    IntegratorControls coarse;
    IntegratorControls fine;
    fine.rel_tol = coarse.rel_tol / 2.0;
    fine.abs_tol = coarse.abs_tol / 2.0;
    const SweepResult a = transition_sweep(p, 0, amps, coarse);
    const SweepResult b = transition_sweep(p, 0, amps, fine);
    CHECK(a.fit.slope == doctest::Approx(b.fit.slope).epsilon(0.01));
}

TEST_CASE("energy decays once the drive is constant") {
    const SquidParams p = fig_params(0.3);
    const DerivedParams d = derive_params(p);
    const FluxPulse pulse = make_pulse_tau(d, 49.4, 300.0, 5.0, 5.0);
    IntegratorControls ctl;
    ctl.sample_dt = 0.5;
    const TransitionResult tr = pulse_transition(p, 0, pulse, ctl);
    REQUIRE(tr.trajectory.has_value());
    const Trajectory& traj = *tr.trajectory;

    double prev = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < traj.tau.size(); ++i) {
        if (traj.tau[i] <= 310.0) continue;  // past the pulse (ends at 305)
        const double energy =
            potential(traj.x[i], 0.0, d.beta_e) + 0.5 * traj.dxdtau[i] * traj.dxdtau[i];
        if (!first) {
            CHECK(energy <= prev + 1e-6);
        }
        prev = energy;
        first = false;
    }
    CHECK(!first);
}

TEST_CASE("final well sits on the duration plateau") {
    const SquidParams p = fig_params(0.3);
    const DerivedParams d = derive_params(p);
    int previous = 0;
    bool first = true;
    for (double duration : {150.0, 300.0, 600.0}) {
        const FluxPulse pulse = make_pulse_tau(d, 49.4, duration, 5.0, 5.0);
        const TransitionResult tr = pulse_transition(p, 0, pulse);
        if (!first) CHECK(tr.final_index == previous);
        previous = tr.final_index;
        first = false;
    }
}

TEST_CASE("negating the drive and the start well negates the landing") {
    const SquidParams p = fig_params(0.5);
    const DerivedParams d = derive_params(p);
    for (double amp : {49.4, 52.36}) {
        const FluxPulse up = make_pulse_tau(d, amp, 300.0, 5.0, 5.0);
        const FluxPulse down = make_pulse_tau(d, -amp, 300.0, 5.0, 5.0);
        const TransitionResult a = pulse_transition(p, 2, up);
        const TransitionResult b = pulse_transition(p, -2, down);
        CHECK(a.final_index == -b.final_index);
    }
}

TEST_CASE("too short a horizon reports not settled") {
    const SquidParams p = fig_params(0.3);
    const DerivedParams d = derive_params(p);
    const FluxPulse pulse = make_pulse_tau(d, 49.4, 300.0, 5.0, 5.0);
    IntegratorControls ctl;
    ctl.max_horizon = 310.0;  // no room for the settle dwell
    const TransitionResult tr = pulse_transition(p, 0, pulse, ctl);
    CHECK(!tr.settled);
}

TEST_CASE("trajectory time grid is monotone and finite") {
    const SquidParams p = fig_params(2.0);
    const DerivedParams d = derive_params(p);
    const FluxPulse pulse = make_pulse_tau(d, 49.4, 100.0, 5.0, 5.0);
    const Trajectory traj = integrate(p, 0.0, 0.0, pulse, 300.0 * d.tau0);
    REQUIRE(traj.tau.size() > 10);
    for (std::size_t i = 1; i < traj.tau.size(); ++i) {
        CHECK(traj.tau[i] > traj.tau[i - 1]);
        CHECK(std::isfinite(traj.x[i]));
        CHECK(std::isfinite(traj.dxdtau[i]));
    }
}
