#pragma once

#include "frontlab/core/banded.hpp"
#include "frontlab/core/error.hpp"

#include <algorithm>
#include <cstddef>
#include <vector>

namespace frontlab {

/// Not-a-knot cubic spline. Reproduces cubic polynomials exactly; outside the
/// knot range the end pieces are continued as cubics.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 4 || y_.size() != n)
            throw Error(ErrorKind::ValidationError, "spline needs at least 4 knots and matching values");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw Error(ErrorKind::ValidationError, "spline knots must be strictly increasing");

        BandMatrix a(n, 2, 2);
        std::vector<double> rhs(n, 0.0);
        auto h = [&](std::size_t i) { return x_[i + 1] - x_[i]; };
        auto slope = [&](std::size_t i) { return (y_[i + 1] - y_[i]) / h(i); };
        a(0, 0) = h(1);
        a(0, 1) = -(h(0) + h(1));
        a(0, 2) = h(0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            a(i, i - 1) = h(i - 1);
            a(i, i) = 2 * (h(i - 1) + h(i));
            a(i, i + 1) = h(i);
            rhs[i] = 6 * (slope(i) - slope(i - 1));
        }
        a(n - 1, n - 3) = h(n - 2);
        a(n - 1, n - 2) = -(h(n - 3) + h(n - 2));
        a(n - 1, n - 1) = h(n - 3);
        BandLU(std::move(a)).solve_in_place(rhs);
        m_ = std::move(rhs);
    }

    double operator()(double x) const { return eval(x, 0); }
    double derivative(double x) const { return eval(x, 1); }
    double second_derivative(double x) const { return eval(x, 2); }

    const std::vector<double>& knots() const noexcept { return x_; }
    const std::vector<double>& values() const noexcept { return y_; }

private:
    double eval(double x, int order) const {
        const std::size_t n = x_.size();
        std::size_t i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
        i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
        const double h = x_[i + 1] - x_[i];
        const double a = x_[i + 1] - x;
        const double b = x - x_[i];
        const double m0 = m_[i], m1 = m_[i + 1];
        switch (order) {
        case 0:
            return m0 * a * a * a / (6 * h) + m1 * b * b * b / (6 * h) + (y_[i] / h - m0 * h / 6) * a +
                   (y_[i + 1] / h - m1 * h / 6) * b;
        case 1:
            return -m0 * a * a / (2 * h) + m1 * b * b / (2 * h) - (y_[i] / h - m0 * h / 6) +
                   (y_[i + 1] / h - m1 * h / 6);
        default:
            return m0 * a / h + m1 * b / h;
        }
    }

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;
};

}  // namespace frontlab
