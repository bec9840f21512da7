#include "squidflux/statics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace squidflux {

namespace {

// x-distance from n to the stability boundary: 1 + beta_e cos(2 pi dstar) = 0.
double dstar_offset(double beta_e) {
    return std::acos(-1.0 / beta_e) / kTwoPi;
}

// Flux balance residual and its x-derivative.
double balance(double x, double xe, double alpha) {
    return x + alpha * sin2pi(x) - xe;
}

double balance_slope(double x, double beta_e) {
    return 1.0 + beta_e * cos2pi(x);
}

// Safeguarded Newton on a bracket [lo, hi] with f(lo)*f(hi) < 0 known.
// Falls back to bisection whenever the Newton step leaves the bracket.
double solve_bracketed(double lo, double hi, double flo, double xe, double alpha,
                       double beta_e) {
    double x = 0.5 * (lo + hi);
    const bool rising = flo < 0.0;
    for (int it = 0; it < 120; ++it) {
        const double f = balance(x, xe, alpha);
        if ((f < 0.0) == rising) {
            lo = x;
        } else {
            hi = x;
        }
        const double fp = balance_slope(x, beta_e);
        double step = (fp != 0.0) ? -f / fp : 0.0;
        double xn = x + step;
        if (!(xn > lo) || !(xn < hi)) {
            xn = 0.5 * (lo + hi);
        }
        if (std::abs(xn - x) < 1e-13 * std::max(1.0, std::abs(x))) {
            return xn;
        }
        x = xn;
    }
    return x;
}

// Unstable stationary point (saddle) between branches n and n+1 at xe.
// The balance is strictly decreasing on (n + dstar, n + 1 - dstar).
std::optional<double> saddle_flux(int n, double xe, const DerivedParams& d) {
    const double dstar = dstar_offset(d.beta_e);
    const double lo = n + dstar + 1e-12;
    const double hi = n + 1.0 - dstar - 1e-12;
    if (!(lo < hi)) return std::nullopt;
    const double alpha = d.alpha();
    const double flo = balance(lo, xe, alpha);
    const double fhi = balance(hi, xe, alpha);
    if (!(flo > 0.0) || !(fhi < 0.0)) return std::nullopt;
    return solve_bracketed(lo, hi, flo, xe, alpha, d.beta_e);
}

}  // namespace

double potential(double x, double xe, double beta_e) {
    const double dx = x - xe;
    return (2.0 * kPi * kPi / beta_e) * dx * dx - cos2pi(x);
}

double potential_curvature(double x, double xe, double beta_e) {
    (void)xe;
    return (4.0 * kPi * kPi / beta_e) * (1.0 + beta_e * cos2pi(x));
}

double fold_offset(double beta_e) {
    // Fold at x = n + dstar; the corresponding xe offset is
    // dstar + alpha sin(2 pi dstar), a hair above alpha + 1/4.
    const double dstar = dstar_offset(beta_e);
    const double alpha = beta_e / kTwoPi;
    return dstar + alpha * std::sin(kTwoPi * dstar);
}

bool branch_exists(int n, double xe, const DerivedParams& d) {
    if (d.beta_e <= 1.0) return true;
    return std::abs(xe - n) < fold_offset(d.beta_e);
}

double well_flux(int n, double xe, const DerivedParams& d) {
    const double alpha = d.alpha();
    if (d.beta_e <= 1.0) {
        // Globally monotone balance: unique solution for any xe.
        double lo = xe - alpha - 1.0, hi = xe + alpha + 1.0;
        return solve_bracketed(lo, hi, balance(lo, xe, alpha), xe, alpha, d.beta_e);
    }
    const double dstar = dstar_offset(d.beta_e);
    const double lo = n - dstar + 1e-12;
    const double hi = n + dstar - 1e-12;
    const double flo = balance(lo, xe, alpha);
    const double fhi = balance(hi, xe, alpha);
    if (!(flo < 0.0) || !(fhi > 0.0)) {
        throw std::domain_error("well_flux: branch " + std::to_string(n) +
                                " does not exist at xe = " + std::to_string(xe));
    }
    return solve_bracketed(lo, hi, flo, xe, alpha, d.beta_e);
}

int max_census_index(const DerivedParams& d) {
    const int m = static_cast<int>(std::floor(d.alpha() + 0.25)) - 1;
    return std::max(m, 0);
}

WellCensus enumerate_wells(const SquidParams& p, double xe) {
    const DerivedParams d = derive_params(p);
    WellCensus census;

    auto make_state = [&](int n) {
        WellState w;
        w.index = n;
        w.flux = well_flux(n, xe, d);
        w.current = (w.flux - xe) * PhysicalConstants::phi0 / p.l;
        const double uw = potential(w.flux, xe, d.beta_e);
        double barrier = std::numeric_limits<double>::infinity();
        if (auto s = saddle_flux(n, xe, d)) {
            barrier = std::min(barrier, potential(*s, xe, d.beta_e) - uw);
        }
        if (auto s = saddle_flux(n - 1, xe, d)) {
            barrier = std::min(barrier, potential(*s, xe, d.beta_e) - uw);
        }
        w.depth = std::isfinite(barrier) ? barrier : 0.0;
        return w;
    };

    if (d.beta_e <= 1.0) {
        const double x = well_flux(0, xe, d);
        WellState w;
        w.index = static_cast<int>(std::lround(x));
        w.flux = x;
        w.current = (x - xe) * PhysicalConstants::phi0 / p.l;
        w.depth = 0.0;
        census.wells.push_back(w);
        census.regime = WellRegime::SingleValued;
        return census;
    }

    census.regime = WellRegime::Hysteretic;
    // Published census range: one index inside the Eq-2 existence bounds on
    // each side, n in [ceil(xe - t) + 1, floor(xe + t) - 1] with t = alpha + 1/4.
    const double t = d.alpha() + 0.25;
    int lo = static_cast<int>(std::ceil(xe - t)) + 1;
    int hi = static_cast<int>(std::floor(xe + t)) - 1;
    if (lo > hi) {
        // Narrow hysteretic regime; keep the well carrying the branch at xe.
        lo = hi = static_cast<int>(std::lround(xe));
    }
    census.wells.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (int n = lo; n <= hi; ++n) {
        census.wells.push_back(make_state(n));
    }
    return census;
}

std::optional<WellState> nearest_well(double x, double xe, const SquidParams& p) {
    const DerivedParams d = derive_params(p);
    const int n0 = static_cast<int>(std::lround(x));
    std::optional<WellState> best;
    for (int n = n0 - 1; n <= n0 + 1; ++n) {
        if (d.beta_e > 1.0 && !branch_exists(n, xe, d)) continue;
        double flux;
        try {
            flux = well_flux(n, xe, d);
        } catch (const std::domain_error&) {
            continue;
        }
        if (!best || std::abs(flux - x) < std::abs(best->flux - x)) {
            WellState w;
            w.index = d.beta_e > 1.0 ? n : static_cast<int>(std::lround(flux));
            w.flux = flux;
            w.current = (flux - xe) * PhysicalConstants::phi0 / p.l;
            w.depth = 0.0;
            best = w;
        }
        if (d.beta_e <= 1.0) break;  // single-valued: one solution overall
    }
    return best;
}

CriticalThreshold critical_threshold(int n, const DerivedParams& d, int sign) {
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("critical_threshold: sign must be +1 or -1");
    }
    const int bound = static_cast<int>(std::floor(d.alpha() + 0.25));
    if (std::abs(n) > bound) {
        throw std::out_of_range("critical_threshold: well index out of range");
    }
    CriticalThreshold th;
    th.approx = n + sign * (d.alpha() + 0.25);
    th.exact = n + sign * fold_offset(d.beta_e);
    return th;
}

HysteresisCurve hysteresis_curve(const SquidParams& p, double xe_min, double xe_max, int points,
                                 double env_offset, const JumpPolicy& policy) {
    if (!(xe_min < xe_max) || points < 2) {
        throw std::invalid_argument("hysteresis_curve: need xe_min < xe_max and points >= 2");
    }
    const DerivedParams d = derive_params(p);
    const double theta = d.beta_e > 1.0 ? fold_offset(d.beta_e) : 0.0;

    JumpPolicy jump = policy;
    if (!jump) {
        jump = [](int n, double, int direction) { return n + direction; };
    }

    auto sweep = [&](int direction) {
        HysteresisBranch b;
        b.direction = direction;
        b.xe.reserve(points);
        b.x.reserve(points);
        const double start = direction > 0 ? xe_min : xe_max;
        const double stop = direction > 0 ? xe_max : xe_min;
        int n = static_cast<int>(std::lround(start + env_offset));
        for (int i = 0; i < points; ++i) {
            const double xe_cmd = start + (stop - start) * i / (points - 1);
            const double xe_eff = xe_cmd + env_offset;
            if (d.beta_e > 1.0) {
                while (std::abs(xe_eff - n) >= theta) {
                    b.xe.push_back(xe_cmd);  // show the vertical jump
                    b.x.push_back(well_flux(n, n + direction * theta * (1.0 - 1e-12), d));
                    n = jump(n, xe_eff, direction);
                    b.jumps.push_back(xe_cmd);
                }
            }
            b.xe.push_back(xe_cmd);
            b.x.push_back(well_flux(n, xe_eff, d));
        }
        return b;
    };

    return {sweep(+1), sweep(-1)};
}

}  // namespace squidflux
