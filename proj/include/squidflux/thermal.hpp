#pragma once

#include <optional>

#include "squidflux/statics.hpp"

namespace squidflux {

// Thermal excitation out of a metastable well, computed entirely in the log
// domain: the rates of interest go far below anything a double can hold.

struct EscapeQuery {
    double i;            // reduced current I/Ic, in [0, 1)
    double temperature;  // K

    void validate() const;
};

enum class BarrierStatus { Ok, Collapsed };

struct EscapeResult {
    double omega_pi;    // biased plasma frequency, rad/s
    double barrier;     // H(i), J; negative once the barrier is gone
    double log10_rate;  // log10 of the rate in 1/s
    BarrierStatus status;

    /// Linear rate, exposed only when representable (|log10| < 300).
    [[nodiscard]] std::optional<double> rate() const;
};

/// Attempt-frequency escape rate: Gamma = (omega_pi / 2 pi) exp(-H(i)/kB T)
/// with omega_pi = omega_p0 (1 - i^2)^(1/4) and
/// H(i) = (Ic phi0/pi)(sqrt(1 - i^2) - i arccos i) - hbar omega_pi / 2.
[[nodiscard]] EscapeResult escape_rate(const EscapeQuery& q, const SquidParams& p);

struct MaxRate {
    int index;        // arg-max well
    double well_flux; // phi0
    double i;         // reduced current there
    EscapeResult result;
};

/// Evaluates the escape rate at i(n) = |flux(n)| phi0 / (L Ic) for every
/// census well and returns the maximum.
[[nodiscard]] MaxRate max_rate_over_wells(const SquidParams& p, double temperature);

/// log10 of the metastable-state lifetime in seconds.
[[nodiscard]] double lifetime_log10_s(const EscapeResult& r);

}  // namespace squidflux
