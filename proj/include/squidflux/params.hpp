#pragma once

#include "squidflux/constants.hpp"

namespace squidflux {

/// Physical rf-SQUID circuit parameters, all SI.
struct SquidParams {
    double ic;  // junction critical current, A
    double l;   // loop self-inductance, H
    double c;   // junction shunt capacitance, F
    double r;   // junction shunt resistance, Ohm

    void validate() const;  // throws std::invalid_argument unless all > 0
};

/// Dimensionless characteristics derived from SquidParams.
struct DerivedParams {
    double beta_e;    // hysteresis (screening) parameter, 2*pi*Ic*L/phi0
    double beta;      // damping parameter, sqrt(L/C)/R
    double beta_c;    // critical damping boundary, 2.97*sqrt(beta_e/2pi)
    double omega_p0;  // zero-bias plasma angular frequency, rad/s
    double tau0;      // natural time unit sqrt(L*C), s

    /// beta_e/2pi = Ic*L/phi0; the flux-balance equations are written in it.
    [[nodiscard]] double alpha() const { return beta_e / kTwoPi; }
};

/// Quantities read off a junction I-V curve.
struct IvMeasurement {
    double ic;  // switching current, A
    double ir;  // retrapping current, A
    double r;   // resistive-branch slope, Ohm

    void validate() const;  // requires 0 < ir <= ic and r > 0
};

enum class DampingRegime { Underdamped, CriticalOrOverdamped };

struct DampingClass {
    DampingRegime regime;
    double ratio;  // beta / beta_c

    [[nodiscard]] bool underdamped() const { return regime == DampingRegime::Underdamped; }
};

[[nodiscard]] DerivedParams derive_params(const SquidParams& p);

[[nodiscard]] DampingClass classify_damping(const DerivedParams& d);

struct IvFitResult {
    SquidParams params;
    DerivedParams derived;
    double q;  // junction quality factor 4*Ic/(pi*Ir)
};

/// Recovers the shunt capacitance from retrapping data via Q = 4 Ic/(pi Ir)
/// and Q = omega_p0*R*C, then derives the full parameter set.
[[nodiscard]] IvFitResult fit_from_iv(const IvMeasurement& iv, double inductance);

/// Shunt resistance that realizes beta/beta_c = ratio for fixed (Ic, L, C).
[[nodiscard]] double shunt_for_damping_ratio(double ic, double l, double c, double ratio);

}  // namespace squidflux
