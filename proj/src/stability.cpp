#include "squidflux/stability.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace squidflux {

void VoltageTrace::validate() const {
    if (samples.size() < 2) {
        throw std::invalid_argument("VoltageTrace: need at least two samples");
    }
    if (!(period > 0.0)) {
        throw std::invalid_argument("VoltageTrace: sample period must be > 0");
    }
}

FluxSeries transduce(const VoltageTrace& trace, double kv) {
    trace.validate();
    if (!(kv > 0.0)) {
        throw std::invalid_argument("transduce: kv must be > 0");
    }
    FluxSeries flux;
    flux.period = trace.period;
    flux.samples.reserve(trace.samples.size());
    for (double v : trace.samples) {
        flux.samples.push_back(kv * v * 1e6);  // phi0/V * V -> micro-phi0
    }
    return flux;
}

FluxNoiseStats flux_stats(const std::vector<double>& series, double mean_offset_phi0) {
    if (series.empty()) {
        throw std::invalid_argument("flux_stats: empty series");
    }
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) /
                        static_cast<double>(series.size());
    double var = 0.0;
    for (double s : series) {
        var += (s - mean) * (s - mean);
    }
    var /= static_cast<double>(series.size());

    FluxNoiseStats stats;
    stats.p2p = *hi - *lo;
    stats.std_dev = std::sqrt(var);
    if (mean_offset_phi0 > 0.0) {
        // std is in micro-phi0, the offset in phi0: the ratio is already PPM.
        stats.rsd_ppm = stats.std_dev / mean_offset_phi0;
    }
    return stats;
}

VoltageTrace dac_noise_trace(const DacModel& dac, double duration, double period,
                             std::uint64_t seed) {
    if (dac.bits < 1) {
        throw std::invalid_argument("dac_noise_trace: need at least 1 bit of resolution");
    }
    if (!(period > 0.0) || !(duration >= period)) {
        throw std::invalid_argument("dac_noise_trace: need duration >= period > 0");
    }
    const std::size_t n = static_cast<std::size_t>(std::floor(duration / period)) + 1;
    const double step = dac.fullscale / std::pow(2.0, dac.bits);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    VoltageTrace trace;
    trace.period = period;
    trace.samples.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double z = std::clamp(gauss(rng), -3.0, 3.0);
        const double jitter = z * dac.noise_p2p / 6.0;  // bounded at +/- p2p/2
        const double v = std::round((dac.setpoint + jitter) / step) * step;
        trace.samples.push_back(v);
    }
    const double mean = std::accumulate(trace.samples.begin(), trace.samples.end(), 0.0) /
                        static_cast<double>(n);
    for (double& v : trace.samples) {
        v -= mean;
    }
    return trace;
}

VoltageTrace load_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_trace_csv: cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line.rfind("t_s,v_rel_V", 0) != 0) {
        throw std::runtime_error("load_trace_csv: expected header 't_s,v_rel_V' in " + path);
    }
    std::vector<double> t, v;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        if (!std::getline(row, cell, ',')) break;
        const double tv = std::stod(cell);
        if (!std::getline(row, cell, ',')) {
            throw std::runtime_error("load_trace_csv: malformed row '" + line + "'");
        }
        t.push_back(tv);
        v.push_back(std::stod(cell));
    }
    VoltageTrace trace;
    trace.period = t.size() >= 2 ? (t.back() - t.front()) / static_cast<double>(t.size() - 1) : 0.0;
    trace.samples = std::move(v);
    trace.validate();
    return trace;
}

}  // namespace squidflux
