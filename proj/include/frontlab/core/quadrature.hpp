#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace frontlab {

enum class Quadrature { Trapezoid, Simpson };

/// Weights of a composite rule on n uniform nodes with spacing h.
/// Simpson on an even number of intervals; with an odd count the last three
/// intervals use the 3/8 rule. Fewer than 4 nodes fall back to trapezoid.
inline std::vector<double> quadrature_weights(std::size_t n, double h, Quadrature rule) {
    std::vector<double> w(n, 0.0);
    if (n < 2) return w;
    if (rule == Quadrature::Trapezoid || n < 4) {
        for (auto& x : w) x = h;
        w.front() = w.back() = 0.5 * h;
        return w;
    }
    const std::size_t intervals = n - 1;
    const std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if (simpson_end != intervals) {
        const std::size_t i = simpson_end;
        w[i] += 3.0 * h / 8.0;
        w[i + 1] += 9.0 * h / 8.0;
        w[i + 2] += 9.0 * h / 8.0;
        w[i + 3] += 3.0 * h / 8.0;
    }
    return w;
}

inline double integrate(std::span<const double> y, double h, Quadrature rule) {
    const auto w = quadrature_weights(y.size(), h, rule);
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) acc += w[i] * y[i];
    return acc;
}

/// Composite 5-point Gauss-Legendre on [a, b]; exact for polynomials of
/// degree 9 on each panel.
template <class F>
double gauss_legendre(F&& f, double a, double b, int panels = 64) {
    static constexpr std::array<double, 5> nodes{
        -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
    static constexpr std::array<double, 5> weights{
        0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
        0.2369268850561891};
    const double step = (b - a) / panels;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * step;
        double panel = 0.0;
        for (std::size_t k = 0; k < 5; ++k) panel += weights[k] * f(mid + 0.5 * step * nodes[k]);
        acc += 0.5 * step * panel;
    }
    return acc;
}

}  // namespace frontlab
