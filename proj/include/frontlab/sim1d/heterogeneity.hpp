#pragma once

#include "frontlab/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace frontlab {

enum class HeterogeneityKind { Sigmoid, Gap, Custom };

/// Perturbation g of the reaction rate; the run uses r(x) = g(x - M).
struct Heterogeneity1D {
    HeterogeneityKind kind = HeterogeneityKind::Sigmoid;
    double A = 0.0;
    double kappa = 0.25;
    double x_left = 0.0;
    double x_right = 0.0;
    double smoothing = 0.1;
    std::vector<double> table_x;  ///< Custom: nodes, linear interpolation, constant beyond
    std::vector<double> table_g;
    double M = 0.0;

    static Heterogeneity1D none() { return sigmoid(0.0, 0.25, 0.0); }

    /// g(x) = A / (1 + e^{-kappa x}).
    static Heterogeneity1D sigmoid(double A, double kappa, double M) {
        Heterogeneity1D h;
        h.kind = HeterogeneityKind::Sigmoid;
        h.A = A;
        h.kappa = kappa;
        h.M = M;
        h.validate();
        return h;
    }

    /// Smoothed plateau of height A on [x_left, x_right].
    static Heterogeneity1D gap(double A, double x_left, double x_right, double smoothing, double M = 0.0) {
        Heterogeneity1D h;
        h.kind = HeterogeneityKind::Gap;
        h.A = A;
        h.x_left = x_left;
        h.x_right = x_right;
        h.smoothing = smoothing;
        h.M = M;
        h.validate();
        return h;
    }

    static Heterogeneity1D custom(std::vector<double> xs, std::vector<double> gs, double M = 0.0) {
        Heterogeneity1D h;
        h.kind = HeterogeneityKind::Custom;
        h.table_x = std::move(xs);
        h.table_g = std::move(gs);
        h.M = M;
        h.validate();
        return h;
    }

    double g(double x) const {
        switch (kind) {
        case HeterogeneityKind::Sigmoid:
            if (A == 0.0) return 0.0;
            return A / (1.0 + std::exp(-kappa * x));
        case HeterogeneityKind::Gap: {
            auto s = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
            return A * (s((x - x_left) / smoothing) - s((x - x_right) / smoothing));
        }
        case HeterogeneityKind::Custom: {
            if (x <= table_x.front()) return table_g.front();
            if (x >= table_x.back()) return table_g.back();
            const auto it = std::upper_bound(table_x.begin(), table_x.end(), x);
            const std::size_t i = static_cast<std::size_t>(it - table_x.begin()) - 1;
            const double t = (x - table_x[i]) / (table_x[i + 1] - table_x[i]);
            return (1 - t) * table_g[i] + t * table_g[i + 1];
        }
        }
        return 0.0;
    }

    double r(double x) const { return g(x - M); }

    double sup_abs() const {
        switch (kind) {
        case HeterogeneityKind::Sigmoid:
        case HeterogeneityKind::Gap:
            return std::abs(A);
        case HeterogeneityKind::Custom: {
            double m = 0.0;
            for (double v : table_g) m = std::max(m, std::abs(v));
            return m;
        }
        }
        return 0.0;
    }

    bool is_zero() const { return sup_abs() == 0.0; }

    void validate() const {
        switch (kind) {
        case HeterogeneityKind::Sigmoid: {
            if (!(kappa > 0.0))
                throw Error(ErrorKind::ValidationError, "kappa must be positive", "sim1d.heterogeneity.kappa");
            // |g(x)| <= e^{kappa x} on a sample reaching deep into the left tail.
            for (int i = 0; i <= 4000; ++i) {
                const double x = -200.0 / kappa + i * (300.0 / kappa) / 4000.0;
                if (std::abs(g(x)) > std::exp(kappa * x) * (1.0 + 1e-12))
                    throw Error(ErrorKind::ValidationError,
                                "|g(x)| exceeds e^{kappa x} at x = " + std::to_string(x),
                                "sim1d.heterogeneity.A");
            }
            break;
        }
        case HeterogeneityKind::Gap:
            if (!(x_right > x_left))
                throw Error(ErrorKind::ValidationError, "gap needs x_right > x_left", "sim1d.heterogeneity.x_right");
            if (!(smoothing > 0.0))
                throw Error(ErrorKind::ValidationError, "gap smoothing must be positive",
                            "sim1d.heterogeneity.smoothing");
            break;
        case HeterogeneityKind::Custom:
            if (table_x.size() < 2 || table_x.size() != table_g.size())
                throw Error(ErrorKind::ValidationError, "custom table needs matching x and g of length >= 2",
                            "sim1d.heterogeneity.table");
            for (std::size_t i = 1; i < table_x.size(); ++i)
                if (!(table_x[i] > table_x[i - 1]))
                    throw Error(ErrorKind::ValidationError, "custom table x must increase",
                                "sim1d.heterogeneity.table");
            break;
        }
        if (!std::isfinite(sup_abs()))
            throw Error(ErrorKind::ValidationError, "g must be bounded", "sim1d.heterogeneity");
    }
};

}  // namespace frontlab
