#pragma once

#include <cmath>

namespace squidflux {

/// Fundamental constants used throughout (SI, CODATA 2018).
struct PhysicalConstants {
    static constexpr double phi0 = 2.067833848e-15;  // magnetic flux quantum h/2e, Wb
    static constexpr double kB = 1.380649e-23;       // Boltzmann constant, J/K
    static constexpr double hbar = 1.054571817e-34;  // reduced Planck constant, J*s
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// sin(2*pi*x) with the periodic part reduced before calling libm, so the
/// result keeps full precision even for |x| of a few hundred flux quanta.
inline double sin2pi(double x) {
    return std::sin(kTwoPi * (x - std::nearbyint(x)));
}

/// cos(2*pi*x), reduced the same way as sin2pi.
inline double cos2pi(double x) {
    return std::cos(kTwoPi * (x - std::nearbyint(x)));
}

}  // namespace squidflux
