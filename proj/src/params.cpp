#include "squidflux/params.hpp"

#include <cmath>
#include <stdexcept>

namespace squidflux {

void SquidParams::validate() const {
    if (!(ic > 0.0) || !(l > 0.0) || !(c > 0.0) || !(r > 0.0)) {
        throw std::invalid_argument("SquidParams: Ic, L, C, R must all be strictly positive");
    }
}

void IvMeasurement::validate() const {
    if (!(ir > 0.0)) {
        throw std::invalid_argument("IvMeasurement: degenerate measurement, Ir must be > 0");
    }
    if (!(ic >= ir) || !(r > 0.0)) {
        throw std::invalid_argument("IvMeasurement: requires 0 < Ir <= Ic and R > 0");
    }
}

DerivedParams derive_params(const SquidParams& p) {
    p.validate();
    DerivedParams d;
    d.beta_e = kTwoPi * p.ic * p.l / PhysicalConstants::phi0;
    d.beta = std::sqrt(p.l / p.c) / p.r;
    d.beta_c = 2.97 * std::sqrt(d.beta_e / kTwoPi);
    d.omega_p0 = std::sqrt(kTwoPi * p.ic / (PhysicalConstants::phi0 * p.c));
    d.tau0 = std::sqrt(p.l * p.c);
    return d;
}

DampingClass classify_damping(const DerivedParams& d) {
    const double ratio = d.beta / d.beta_c;
    return {ratio < 1.0 ? DampingRegime::Underdamped : DampingRegime::CriticalOrOverdamped,
            ratio};
}

IvFitResult fit_from_iv(const IvMeasurement& iv, double inductance) {
    iv.validate();
    if (!(inductance > 0.0)) {
        throw std::invalid_argument("fit_from_iv: inductance must be > 0");
    }
    const double q = 4.0 * iv.ic / (kPi * iv.ir);
    const double c = q * q * PhysicalConstants::phi0 / (kTwoPi * iv.ic * iv.r * iv.r);
    SquidParams p{iv.ic, inductance, c, iv.r};
    return {p, derive_params(p), q};
}

double shunt_for_damping_ratio(double ic, double l, double c, double ratio) {
    if (!(ic > 0.0) || !(l > 0.0) || !(c > 0.0) || !(ratio > 0.0)) {
        throw std::invalid_argument("shunt_for_damping_ratio: all arguments must be > 0");
    }
    const double beta_c = 2.97 * std::sqrt(ic * l / PhysicalConstants::phi0);
    return std::sqrt(l / c) / (ratio * beta_c);
}

}  // namespace squidflux
