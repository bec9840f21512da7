#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "squidflux/params.hpp"

namespace squidflux {

// Static flux balance of the hysteretic rf-SQUID, fluxes in phi0 units:
//
//     xe = x + alpha * sin(2 pi x),   alpha = beta_e / 2 pi
//
// Branch n is the stable solution near x = n; it exists while
// |xe - n| < fold_offset(beta_e) and disappears in a fold where
// 1 + beta_e cos(2 pi x) = 0.

/// One metastable solution of the flux balance.
struct WellState {
    int index;       // n, well label
    double flux;     // exact total flux, phi0 units
    double current;  // loop current (flux - xe)*phi0/L, A
    double depth;    // lower adjacent barrier height, EJ units
};

enum class WellRegime { Hysteretic, SingleValued };

struct WellCensus {
    std::vector<WellState> wells;
    WellRegime regime;
};

/// Washboard potential u(x) = (2 pi^2/beta_e)(x - xe)^2 - cos(2 pi x), EJ units.
[[nodiscard]] double potential(double x, double xe, double beta_e);

/// d^2u/dx^2 = (4 pi^2/beta_e)(1 + beta_e cos(2 pi x)).
[[nodiscard]] double potential_curvature(double x, double xe, double beta_e);

/// Exact distance from n to the fold of branch n (slightly above alpha + 1/4).
[[nodiscard]] double fold_offset(double beta_e);

[[nodiscard]] bool branch_exists(int n, double xe, const DerivedParams& d);

/// Exact flux of branch n at external flux xe; throws if the branch is absent.
[[nodiscard]] double well_flux(int n, double xe, const DerivedParams& d);

/// Largest census well index at xe = 0: floor(alpha + 1/4) - 1 (never below 0).
[[nodiscard]] int max_census_index(const DerivedParams& d);

/// All census wells at external flux xe. In the single-valued regime
/// (beta_e <= 1) the unique solution is returned with a SingleValued tag.
[[nodiscard]] WellCensus enumerate_wells(const SquidParams& p, double xe);

/// Stable solution closest to flux x, searched around round(x).
[[nodiscard]] std::optional<WellState> nearest_well(double x, double xe, const SquidParams& p);

struct CriticalThreshold {
    double approx;  // Eq-2 style: n + sign*(alpha + 1/4), phi0
    double exact;   // xe at the fold of branch n, phi0
};

/// Applied-flux threshold destabilizing well n in the given direction (+1/-1).
[[nodiscard]] CriticalThreshold critical_threshold(int n, const DerivedParams& d, int sign);

struct HysteresisBranch {
    int direction;              // +1 sweep up, -1 sweep down
    std::vector<double> xe;     // commanded external flux, phi0
    std::vector<double> x;      // total flux, phi0
    std::vector<double> jumps;  // commanded xe at which the state jumped
};

/// Decides the landing branch when the current branch folds.
/// Arguments: (current index, effective xe at the fold, sweep direction).
using JumpPolicy = std::function<int(int, double, int)>;

struct HysteresisCurve {
    HysteresisBranch up;
    HysteresisBranch down;
};

/// Quasi-static sweep over [xe_min, xe_max]. env_offset is a constant flux
/// added on top of the commanded value. The default policy lands on the
/// adjacent well (overdamped quasi-static limit); pass a policy to resolve
/// jumps differently, e.g. through the dynamics module.
[[nodiscard]] HysteresisCurve hysteresis_curve(const SquidParams& p, double xe_min, double xe_max,
                                               int points, double env_offset = 0.0,
                                               const JumpPolicy& policy = {});

}  // namespace squidflux
