#include <doctest.h>

#include <cmath>

#include "squidflux/thermal.hpp"

using namespace squidflux;

namespace {
const SquidParams kExpParams{320e-6, 1.18e-9, 2.34e-12, 1.85};
}

TEST_CASE("zero-bias plasma frequency") {
    const EscapeResult r = escape_rate({0.0, 0.020}, kExpParams);
    CHECK(r.omega_pi / kTwoPi / 1e9 == doctest::Approx(102.6).epsilon(0.005));
    CHECK(r.status == BarrierStatus::Ok);
}

TEST_CASE("zero-bias barrier closed form") {
    const EscapeResult r = escape_rate({0.0, 0.020}, kExpParams);
    const double expected = kExpParams.ic * PhysicalConstants::phi0 / kPi -
                            0.5 * PhysicalConstants::hbar * r.omega_pi;
    CHECK(r.barrier == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("maximum escape rate over the census") {
    const MaxRate cold = max_rate_over_wells(kExpParams, 0.020);
    const MaxRate warm = max_rate_over_wells(kExpParams, 0.100);

    // Wide tolerances: the published inputs are rounded and the exponent is
    // extremely sensitive to the reduced current.
    CHECK(std::abs(cold.result.log10_rate - (-284.4)) < 60.0);
    CHECK(std::abs(warm.result.log10_rate - (-48.4)) < 12.0);
    CHECK(cold.result.log10_rate < -200.0);

    CHECK(std::abs(std::abs(cold.well_flux) - 180.8) < 1.0);
    CHECK(std::abs(cold.index) == 181);
}

TEST_CASE("rate grows with the well index and with temperature") {
    const double ili = kExpParams.l * kExpParams.ic / PhysicalConstants::phi0;
    double prev = -1e30;
    for (int n : {10, 60, 120, 170, 181}) {
        const DerivedParams d = derive_params(kExpParams);
        const double i = well_flux(n, 0.0, d) / ili;
        const EscapeResult r = escape_rate({i, 0.020}, kExpParams);
        CHECK(r.log10_rate > prev);
        prev = r.log10_rate;

        const EscapeResult hot = escape_rate({i, 0.040}, kExpParams);
        CHECK(hot.log10_rate > r.log10_rate);
    }
}

TEST_CASE("lifetime is the negated rate exponent") {
    EscapeResult r = escape_rate({0.5, 0.020}, kExpParams);
    r.log10_rate = 0.0;
    CHECK(lifetime_log10_s(r) == 0.0);
    r.log10_rate = -48.4;
    CHECK(lifetime_log10_s(r) == doctest::Approx(48.4));

    const MaxRate cold = max_rate_over_wells(kExpParams, 0.020);
    CHECK(lifetime_log10_s(cold.result) > 200.0);
}

TEST_CASE("biased plasma frequency matches the potential curvature") {
    // omega_pi/omega_p0 = (1 - i^2)^(1/4) against a finite-difference second
    // derivative of the washboard potential at the well, up to the small
    // loop-inductance term.
    const DerivedParams d = derive_params(kExpParams);
    const double ili = kExpParams.l * kExpParams.ic / PhysicalConstants::phi0;
    const double ej = kExpParams.ic * PhysicalConstants::phi0 / kTwoPi;
    const double phi0 = PhysicalConstants::phi0;

    for (int n : {20, 80, 130, 160}) {
        const double xw = well_flux(n, 0.0, d);
        const double i = xw / ili;
        if (i >= 0.9) continue;

        const double h = 1e-5;
        const double upp = (potential(xw + h, 0.0, d.beta_e) - 2.0 * potential(xw, 0.0, d.beta_e) +
                            potential(xw - h, 0.0, d.beta_e)) /
                           (h * h);
        // Junction-only curvature: remove the magnetostatic 4 pi^2/beta_e term.
        const double upp_junction = upp - 4.0 * kPi * kPi / d.beta_e;
        const double omega_fd = std::sqrt(ej * upp_junction / (kExpParams.c * phi0 * phi0));

        const EscapeResult r = escape_rate({i, 0.020}, kExpParams);
        CHECK(r.omega_pi == doctest::Approx(omega_fd).epsilon(0.01));
    }
}

TEST_CASE("log-domain evaluation never overflows") {
    for (double t : {0.001, 0.020, 0.100}) {
        for (double i : {0.0, 0.5, 0.99, 0.999}) {
            const EscapeResult r = escape_rate({i, t}, kExpParams);
            CHECK(std::isfinite(r.log10_rate));
            CHECK(std::isfinite(r.barrier));
        }
    }
}

TEST_CASE("barrier collapse near the critical current") {
    const EscapeResult r = escape_rate({0.9999, 0.020}, kExpParams);
    CHECK(r.status == BarrierStatus::Collapsed);
    CHECK(r.barrier < 0.0);
    CHECK(std::isfinite(r.log10_rate));
}

TEST_CASE("linear rate only when representable") {
    EscapeResult r = escape_rate({0.0, 0.020}, kExpParams);
    CHECK(!r.rate().has_value());  // astronomically small
    r.log10_rate = -12.0;
    REQUIRE(r.rate().has_value());
    CHECK(*r.rate() == doctest::Approx(1e-12));
}

TEST_CASE("query validation") {
    CHECK_THROWS_AS(escape_rate({-0.1, 0.020}, kExpParams), std::invalid_argument);
    CHECK_THROWS_AS(escape_rate({1.0, 0.020}, kExpParams), std::invalid_argument);
    CHECK_THROWS_AS(escape_rate({0.5, 0.0}, kExpParams), std::invalid_argument);
}
