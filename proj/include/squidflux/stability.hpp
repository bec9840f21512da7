#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace squidflux {

// Voltage-noise transduction from room-temperature electronics onto the
// qubit flux, and the flux-stability statistics used to compare control
// schemes.

struct VoltageTrace {
    double period;                // sample period, s
    std::vector<double> samples;  // V, relative to the mean

    void validate() const;  // >= 2 samples, period > 0
};

struct FluxSeries {
    double period;                // s
    std::vector<double> samples;  // micro-phi0
};

struct FluxNoiseStats {
    double p2p;                     // micro-phi0
    double std_dev;                 // micro-phi0, population standard deviation
    std::optional<double> rsd_ppm;  // std / |mean flux offset|, parts per million
};

/// Elementwise voltage-to-flux conversion, kv in phi0 per volt.
[[nodiscard]] FluxSeries transduce(const VoltageTrace& trace, double kv);

/// Stats of a flux series (micro-phi0). The RSD denominator is the mean
/// qubit-flux offset in phi0; it is omitted unless positive.
[[nodiscard]] FluxNoiseStats flux_stats(const std::vector<double>& series_uphi0,
                                        double mean_offset_phi0);

/// DAC output model: quantization to fullscale/2^bits steps plus bounded
/// jitter (normal, clipped at +/- noise_p2p/2). Deterministic per seed.
struct DacModel {
    int bits = 16;
    double fullscale = 1.0;  // V
    double noise_p2p = 0.0;  // V
    double setpoint = 0.0;   // V
};

[[nodiscard]] VoltageTrace dac_noise_trace(const DacModel& dac, double duration, double period,
                                           std::uint64_t seed);

/// Reads a trace from CSV with header "t_s,v_rel_V".
[[nodiscard]] VoltageTrace load_trace_csv(const std::string& path);

// Calibrated flux-per-volt coefficients, phi0/V. The two anchors disagree by
// ~9%; they are kept separate and the default is their mean.
inline constexpr double kFluxPerVoltIdle = 1.275;          // near-zero output
inline constexpr double kFluxPerVoltBiased = 50.2 / 36.0;  // at a large setpoint
inline constexpr double kFluxPerVoltDefault = 0.5 * (kFluxPerVoltIdle + kFluxPerVoltBiased);

}  // namespace squidflux
