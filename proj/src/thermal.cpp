#include "squidflux/thermal.hpp"

#include <cmath>
#include <stdexcept>

namespace squidflux {

void EscapeQuery::validate() const {
    if (!(i >= 0.0) || !(i < 1.0)) {
        throw std::invalid_argument("EscapeQuery: reduced current must lie in [0, 1)");
    }
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("EscapeQuery: temperature must be > 0");
    }
}

std::optional<double> EscapeResult::rate() const {
    if (std::abs(log10_rate) < 300.0) {
        return std::pow(10.0, log10_rate);
    }
    return std::nullopt;
}

EscapeResult escape_rate(const EscapeQuery& q, const SquidParams& p) {
    q.validate();
    const DerivedParams d = derive_params(p);

    EscapeResult r;
    const double one_minus_i2 = (1.0 - q.i) * (1.0 + q.i);
    r.omega_pi = d.omega_p0 * std::pow(one_minus_i2, 0.25);
    r.barrier = (p.ic * PhysicalConstants::phi0 / kPi) *
                    (std::sqrt(one_minus_i2) - q.i * std::acos(q.i)) -
                0.5 * PhysicalConstants::hbar * r.omega_pi;
    r.status = r.barrier >= 0.0 ? BarrierStatus::Ok : BarrierStatus::Collapsed;
    r.log10_rate = std::log10(r.omega_pi / kTwoPi) -
                   r.barrier / (PhysicalConstants::kB * q.temperature) / std::log(10.0);
    return r;
}

MaxRate max_rate_over_wells(const SquidParams& p, double temperature) {
    const WellCensus census = enumerate_wells(p, 0.0);
    if (census.regime != WellRegime::Hysteretic) {
        throw std::invalid_argument("max_rate_over_wells: requires the hysteretic regime");
    }
    const double ili = p.l * p.ic / PhysicalConstants::phi0;  // = alpha

    std::optional<MaxRate> best;
    for (const WellState& w : census.wells) {
        EscapeQuery q;
        q.i = std::abs(w.flux) / ili;
        q.temperature = temperature;
        const EscapeResult r = escape_rate(q, p);
        if (!best || r.log10_rate > best->result.log10_rate) {
            best = MaxRate{w.index, w.flux, q.i, r};
        }
    }
    return *best;
}

double lifetime_log10_s(const EscapeResult& r) {
    return -r.log10_rate;
}

}  // namespace squidflux
