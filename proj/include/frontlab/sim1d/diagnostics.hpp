#pragma once

#include "frontlab/core/error.hpp"
#include "frontlab/core/fit.hpp"
#include "frontlab/sim1d/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace frontlab {

/// The two readings of the decay exponent built from alpha = kappa/2 and
/// sigma = kappa/(2c): inf{2a - 3a/2, 2a(1 + s), a + s mu} as printed, and
/// inf{2a - s c/2, 2a(1 + s), a + s mu} with the first entry read from the
/// boundary condition that produces it.
struct GammaCandidates {
    double printed = 0.0;
    double alternative = 0.0;
};

inline GammaCandidates gamma_candidates(double kappa, double c, double mu) {
    const double a = 0.5 * kappa;
    const double s = kappa / (2.0 * c);
    GammaCandidates g;
    g.printed = std::min({2 * a - 1.5 * a, 2 * a * (1 + s), a + s * mu});
    g.alternative = std::min({2 * a - 0.5 * s * c, 2 * a * (1 + s), a + s * mu});
    return g;
}

struct DecayFit {
    double K = std::numeric_limits<double>::quiet_NaN();
    double gamma = std::numeric_limits<double>::quiet_NaN();
    double r_squared = std::numeric_limits<double>::quiet_NaN();
    std::size_t points = 0;
    double t_lo = 0.0, t_hi = 0.0;  ///< window actually used
    double N0_est = std::numeric_limits<double>::quiet_NaN();  ///< first time sup_err > eps1
    double decades = 0.0;  ///< log10 change of the fitted curve across the window
    /// No exponential law in the window: R^2 < 0.5, or the fitted curve
    /// changes by less than one decade (a slowly drifting error floor).
    bool flagged = false;
};

/// Least squares of log(sup_err) against (c t - M) over the snapshots with
/// t in [t_lo, t_hi], clipped before the first snapshot where sup_err
/// exceeds eps1.
inline DecayFit decay_fit(const RunTrajectory& traj, double M, double t_lo, double t_hi, double eps1 = 0.1) {
    DecayFit fit;
    for (const auto& s : traj.snapshots)
        if (s.sup_err > eps1) {
            fit.N0_est = s.t;
            break;
        }
    if (!std::isnan(fit.N0_est)) t_hi = std::min(t_hi, fit.N0_est - 1e-12);
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    std::vector<double> xs, ys;
    for (const auto& s : traj.snapshots) {
        if (s.t < t_lo - 1e-12 || s.t > t_hi + 1e-12 || !(s.sup_err > 0.0)) continue;
        xs.push_back(traj.c * s.t - M);
        ys.push_back(std::log(s.sup_err));
    }
    fit.points = xs.size();
    if (xs.size() < 3) throw Error(ErrorKind::EmptyWindow, "fewer than 3 snapshots in the decay window");
    const auto line = fit_line(xs, ys);
    fit.gamma = line.slope;
    fit.K = std::exp(line.intercept);
    fit.r_squared = line.r_squared;
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    fit.decades = std::abs(line.slope) * (*hi - *lo) / std::log(10.0);
    fit.flagged = !(fit.r_squared >= 0.5) || fit.decades < 1.0;
    return fit;
}

/// Mean vertical offset, over times t in [t_lo, t_hi], between two fitted
/// laws log K + gamma (c t - M); used to measure the effect of changing M.
inline double fitted_curve_shift(const DecayFit& base, double M_base, const DecayFit& other, double M_other, double c,
                                 double t_lo, double t_hi, int samples = 101) {
    double acc = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / double(samples - 1);
        const double a = std::log(base.K) + base.gamma * (c * t - M_base);
        const double b = std::log(other.K) + other.gamma * (c * t - M_other);
        acc += b - a;
    }
    return acc / samples;
}

}  // namespace frontlab
