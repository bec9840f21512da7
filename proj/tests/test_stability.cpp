#include <doctest.h>

#include <cmath>

#include "squidflux/qubitmap.hpp"
#include "squidflux/stability.hpp"

using namespace squidflux;

namespace {

VoltageTrace square_trace(double p2p_v, std::size_t n = 16) {
    VoltageTrace trace;
    trace.period = 120.0;
    for (std::size_t i = 0; i < n; ++i) {
        trace.samples.push_back(i % 2 == 0 ? -p2p_v / 2.0 : p2p_v / 2.0);
    }
    return trace;
}

}  // namespace

TEST_CASE("transduction anchors") {
    // 0.012 mV ripple at the idle-output coefficient.
    const FluxSeries idle = transduce(square_trace(0.012e-3), kFluxPerVoltIdle);
    CHECK(flux_stats(idle.samples, 0.0).p2p == doctest::Approx(15.3).epsilon(1e-12));

    // 0.036 mV ripple at the biased-output coefficient.
    const FluxSeries biased = transduce(square_trace(0.036e-3), kFluxPerVoltBiased);
    CHECK(flux_stats(biased.samples, 0.0).p2p == doctest::Approx(50.2).epsilon(1e-12));

    // Zero trace stays zero.
    const FluxSeries none = transduce(square_trace(0.0), kFluxPerVoltIdle);
    for (double s : none.samples) CHECK(s == 0.0);
}

TEST_CASE("transduction is exactly linear") {
    const VoltageTrace trace = square_trace(0.024e-3);
    VoltageTrace scaled = trace;
    for (double& v : scaled.samples) v *= 3.0;
    const FluxSeries a = transduce(trace, 1.3);
    const FluxSeries b = transduce(scaled, 1.3);
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(b.samples[i] == 3.0 * a.samples[i]);
    }
}

TEST_CASE("relative standard deviation definition") {
    const CouplingNetwork net{70e-12, 2.90e-12, 4.07e-12, 1.18e-9};
    const TransmonModel model{5.1387, 0.0};
    const double offset = infer_squid_state(4.5904, model, net).qubit_flux;
    CHECK(offset == doctest::Approx(0.206).epsilon(0.005));

    // Published standard deviations through the pinned RSD definition.
    CHECK(4.9 / offset == doctest::Approx(24.5).epsilon(0.05));
    CHECK(11.0 / offset == doctest::Approx(55.0).epsilon(0.05));

    // The same numbers through flux_stats on a synthetic series.
    std::vector<double> series{-4.9, 4.9};  // std = 4.9 micro-phi0
    const FluxNoiseStats stats = flux_stats(series, offset);
    REQUIRE(stats.rsd_ppm.has_value());
    CHECK(*stats.rsd_ppm == doctest::Approx(24.5).epsilon(0.05));
}

TEST_CASE("stats basics") {
    SUBCASE("constant series has zero spread") {
        const FluxNoiseStats stats = flux_stats({3.0, 3.0, 3.0}, 0.5);
        CHECK(stats.p2p == 0.0);
        CHECK(stats.std_dev == 0.0);
    }
    SUBCASE("empty series is an error") {
        CHECK_THROWS_AS(flux_stats({}, 0.5), std::invalid_argument);
    }
    SUBCASE("rsd omitted without a positive offset") {
        CHECK(!flux_stats({1.0, 2.0}, 0.0).rsd_ppm.has_value());
        CHECK(!flux_stats({1.0, 2.0}, -1.0).rsd_ppm.has_value());
    }
    SUBCASE("shift invariance and scale covariance") {
        std::vector<double> base{0.3, -1.2, 0.8, 2.1, -0.4};
        std::vector<double> shifted, scaled;
        for (double s : base) {
            shifted.push_back(s + 17.0);
            scaled.push_back(2.5 * s);
        }
        const FluxNoiseStats b = flux_stats(base, 0.2);
        const FluxNoiseStats sh = flux_stats(shifted, 0.2);
        const FluxNoiseStats sc = flux_stats(scaled, 0.2);
        CHECK(sh.p2p == doctest::Approx(b.p2p));
        CHECK(sh.std_dev == doctest::Approx(b.std_dev));
        CHECK(sc.p2p == doctest::Approx(2.5 * b.p2p));
        CHECK(sc.std_dev == doctest::Approx(2.5 * b.std_dev));
    }
}

TEST_CASE("scheme comparison mirrors the published ordering") {
    const FluxSeries rf = transduce(square_trace(0.012e-3), kFluxPerVoltIdle);
    const FluxSeries z = transduce(square_trace(0.036e-3), kFluxPerVoltBiased);
    const FluxNoiseStats rf_stats = flux_stats(rf.samples, 0.206);
    const FluxNoiseStats z_stats = flux_stats(z.samples, 0.206);
    CHECK(rf_stats.std_dev < z_stats.std_dev);
    CHECK(rf_stats.p2p < z_stats.p2p);
}

TEST_CASE("DAC noise model") {
    SUBCASE("noise-free setpoint on a code boundary is constant") {
        DacModel dac;
        dac.bits = 12;
        dac.fullscale = 1.0;
        dac.noise_p2p = 0.0;
        dac.setpoint = 32.0 / 4096.0;
        const VoltageTrace trace = dac_noise_trace(dac, 1200.0, 120.0, 99);
        for (double v : trace.samples) CHECK(v == 0.0);  // relative to mean
    }
    SUBCASE("halving the jitter halves the spread in the quantization-free regime") {
        DacModel dac;
        dac.bits = 30;  // steps far below the jitter
        dac.noise_p2p = 1e-3;
        const VoltageTrace full = dac_noise_trace(dac, 12000.0, 120.0, 5);
        dac.noise_p2p = 0.5e-3;
        const VoltageTrace half = dac_noise_trace(dac, 12000.0, 120.0, 5);
        REQUIRE(full.samples.size() == half.samples.size());
        const FluxNoiseStats f = flux_stats(transduce(full, 1.0).samples, 0.0);
        const FluxNoiseStats h = flux_stats(transduce(half, 1.0).samples, 0.0);
        CHECK(h.p2p == doctest::Approx(0.5 * f.p2p).epsilon(1e-6));
    }
    SUBCASE("16-bit jitter tuned to the biased-output ripple") {
        // Tune the jitter so the transduced peak-to-peak approximates the
        // 50.2 micro-phi0 working point, then compare the standard deviation
        // with the published Z-line figure.
        DacModel dac;
        dac.bits = 16;
        dac.fullscale = 0.4;
        dac.setpoint = 188.797e-3;
        dac.noise_p2p = 0.036e-3;
        const double duration = 200.0 * 120.0, period = 120.0;

        VoltageTrace trace = dac_noise_trace(dac, duration, period, 1234);
        FluxNoiseStats stats = flux_stats(transduce(trace, kFluxPerVoltBiased).samples, 0.0);
        // One linear correction pass onto the target peak-to-peak.
        dac.noise_p2p *= 50.2 / stats.p2p;
        trace = dac_noise_trace(dac, duration, period, 1234);
        stats = flux_stats(transduce(trace, kFluxPerVoltBiased).samples, 0.0);

        CHECK(stats.p2p == doctest::Approx(50.2).epsilon(0.10));
        CHECK(stats.std_dev == doctest::Approx(11.0).epsilon(0.20));
    }
    SUBCASE("deterministic under a fixed seed") {
        DacModel dac;
        dac.noise_p2p = 1e-4;
        const VoltageTrace a = dac_noise_trace(dac, 1200.0, 120.0, 42);
        const VoltageTrace b = dac_noise_trace(dac, 1200.0, 120.0, 42);
        REQUIRE(a.samples.size() == b.samples.size());
        for (std::size_t i = 0; i < a.samples.size(); ++i) {
            CHECK(a.samples[i] == b.samples[i]);
        }
    }
}

TEST_CASE("trace validation") {
    VoltageTrace bad;
    bad.period = 1.0;
    bad.samples = {0.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(transduce(square_trace(1e-3), 0.0), std::invalid_argument);
}
