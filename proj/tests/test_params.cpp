#include <doctest.h>

#include "squidflux/params.hpp"

using namespace squidflux;

namespace {
const SquidParams kFigParams{100e-6, 1e-9, 2e-12, 0.5};
const SquidParams kExpParams{320e-6, 1.18e-9, 2.34e-12, 1.85};
}  // namespace

TEST_CASE("hysteresis parameter of the reference circuit") {
    const DerivedParams d = derive_params(kFigParams);
    CHECK(std::abs(d.beta_e - 303.9) < 0.1);
}

TEST_CASE("experimental damping parameters") {
    const DerivedParams d = derive_params(kExpParams);
    CHECK(std::abs(d.beta - 12.1) < 0.2);
    CHECK(std::abs(d.beta_c - 40.1) < 0.2);
}

TEST_CASE("vanishing critical current leaves the non-hysteretic regime") {
    const DerivedParams d = derive_params({1e-12, 1e-9, 2e-12, 1.0});
    CHECK(d.beta_e < 1.0);
    CHECK(d.beta_e > 0.0);
}

TEST_CASE("non-positive parameters are rejected") {
    CHECK_THROWS_AS(derive_params({0.0, 1e-9, 2e-12, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(derive_params({1e-6, -1e-9, 2e-12, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(derive_params({1e-6, 1e-9, 0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(derive_params({1e-6, 1e-9, 2e-12, 0.0}), std::invalid_argument);
}

TEST_CASE("damping classification") {
    SUBCASE("experimental sample is underdamped") {
        const DampingClass c = classify_damping(derive_params(kExpParams));
        CHECK(c.regime == DampingRegime::Underdamped);
        CHECK(c.ratio == doctest::Approx(0.30).epsilon(0.02));
    }
    SUBCASE("0.5 ohm shunt on the reference circuit is overdamped") {
        const DampingClass c = classify_damping(derive_params(kFigParams));
        CHECK(c.regime == DampingRegime::CriticalOrOverdamped);
        CHECK(std::abs(c.ratio - 2.0) < 0.2);
    }
    SUBCASE("beta equal to beta_c classifies as critical") {
        DerivedParams d = derive_params(kFigParams);
        d.beta = d.beta_c;
        const DampingClass c = classify_damping(d);
        CHECK(c.regime == DampingRegime::CriticalOrOverdamped);
        CHECK(c.ratio == doctest::Approx(1.0));
    }
}

TEST_CASE("capacitance recovered from the I-V retrapping point") {
    const IvMeasurement iv{320e-6, 146e-6, 1.85};
    const IvFitResult fit = fit_from_iv(iv, 1.18e-9);

    CHECK(fit.q == doctest::Approx(2.79).epsilon(0.004));
    CHECK(fit.params.c == doctest::Approx(2.34e-12).epsilon(0.02));
    CHECK(fit.derived.beta == doctest::Approx(12.1).epsilon(0.02));
    CHECK(fit.derived.beta_c == doctest::Approx(40.1).epsilon(0.02));
}

TEST_CASE("Q = 1 reduces the fitted capacitance to the bare form") {
    const double ic = 320e-6, r = 1.85;
    const IvMeasurement iv{ic, 4.0 * ic / kPi, r};
    const IvFitResult fit = fit_from_iv(iv, 1.18e-9);
    CHECK(fit.q == doctest::Approx(1.0));
    CHECK(fit.params.c ==
          doctest::Approx(PhysicalConstants::phi0 / (kTwoPi * ic * r * r)).epsilon(1e-12));
}

TEST_CASE("zero retrapping current is a degenerate measurement") {
    CHECK_THROWS_AS(fit_from_iv({320e-6, 0.0, 1.85}, 1.18e-9), std::invalid_argument);
}

TEST_CASE("scale consistency of the derived parameters") {
    const DerivedParams base = derive_params(kExpParams);

    SquidParams doubled_ic = kExpParams;
    doubled_ic.ic *= 2.0;
    CHECK(derive_params(doubled_ic).beta_e == 2.0 * base.beta_e);

    SquidParams doubled_r = kExpParams;
    doubled_r.r *= 2.0;
    CHECK(derive_params(doubled_r).beta == 0.5 * base.beta);
}

TEST_CASE("experimental plasma frequency") {
    const DerivedParams d = derive_params(kExpParams);
    CHECK(d.omega_p0 / kTwoPi / 1e9 == doctest::Approx(102.6).epsilon(0.005));
}

TEST_CASE("I-V fit round trip stays within two percent") {
    const IvFitResult fit = fit_from_iv({320e-6, 146e-6, 1.85}, 1.18e-9);
    const DerivedParams d = derive_params(fit.params);
    CHECK(d.beta == doctest::Approx(fit.derived.beta));
    CHECK(std::abs(d.beta - 12.1) / 12.1 < 0.02);
    CHECK(std::abs(d.beta_c - 40.1) / 40.1 < 0.02);
}

TEST_CASE("shunt_for_damping_ratio inverts the classification") {
    for (double ratio : {0.3, 0.5, 1.0, 2.0}) {
        const double r = shunt_for_damping_ratio(100e-6, 1e-9, 2e-12, ratio);
        const DampingClass c = classify_damping(derive_params({100e-6, 1e-9, 2e-12, r}));
        CHECK(c.ratio == doctest::Approx(ratio).epsilon(1e-12));
    }
}
