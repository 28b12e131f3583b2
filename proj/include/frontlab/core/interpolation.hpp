#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace frontlab {

/// Cubic Hermite value and derivative on one cell of width h, t in [0, 1].
struct HermiteSample {
    double value;
    double slope;
};

inline HermiteSample hermite_cubic(double y0, double y1, double d0, double d1, double h, double t) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    const double value = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
    const double dh00 = 6 * t2 - 6 * t;
    const double dh10 = 3 * t2 - 4 * t + 1;
    const double dh01 = -6 * t2 + 6 * t;
    const double dh11 = 3 * t2 - 2 * t;
    const double slope = (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1;
    return {value, slope};
}

/// Six-point Lagrange interpolation on a uniform grid starting at x0.
/// Returns the node value unchanged when x falls on a node.
inline double lagrange_uniform(std::span<const double> y, double x0, double h, double x) {
    const std::size_t n = y.size();
    const double s = (x - x0) / h;
    const double nearest = std::round(s);
    if (std::abs(s - nearest) < 1e-12 && nearest >= 0 && nearest <= double(n - 1))
        return y[static_cast<std::size_t>(nearest)];
    if (n < 6) {
        const double sc = std::clamp(s, 0.0, double(n - 1));
        const auto i = std::min<std::size_t>(static_cast<std::size_t>(sc), n - 2);
        const double t = sc - double(i);
        return (1 - t) * y[i] + t * y[i + 1];
    }
    long start = static_cast<long>(std::floor(s)) - 2;
    start = std::clamp(start, 0L, static_cast<long>(n) - 6);
    double acc = 0.0;
    for (int j = 0; j < 6; ++j) {
        double basis = 1.0;
        const double sj = double(start + j);
        for (int k = 0; k < 6; ++k) {
            if (k == j) continue;
            const double sk = double(start + k);
            basis *= (s - sk) / (sj - sk);
        }
        acc += basis * y[static_cast<std::size_t>(start + j)];
    }
    return acc;
}

}  // namespace frontlab
