#pragma once

#include "frontlab/core/error.hpp"
#include "frontlab/core/quadrature.hpp"
#include "frontlab/core/spline.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace frontlab {

enum class NonlinearityKind { Cubic, Tabulated };

/// Bistable reaction term f with zeros 0 < theta < 1.
class Nonlinearity {
public:
    static Nonlinearity cubic(double theta) {
        if (!(theta > 0.0 && theta < 1.0))
            throw Error(ErrorKind::ValidationError, "theta must lie in (0, 1)", "nonlinearity.theta");
        Nonlinearity n;
        n.kind_ = NonlinearityKind::Cubic;
        n.theta_ = theta;
        return n;
    }

    /// Cubic spline through (u, f(u)) knots; theta is the interior zero.
    static Nonlinearity tabulated(std::vector<double> u, std::vector<double> f, double theta) {
        if (!(theta > 0.0 && theta < 1.0))
            throw Error(ErrorKind::ValidationError, "theta must lie in (0, 1)", "nonlinearity.theta");
        Nonlinearity n;
        n.kind_ = NonlinearityKind::Tabulated;
        n.theta_ = theta;
        n.table_ = CubicSpline(std::move(u), std::move(f));
        return n;
    }

    NonlinearityKind kind() const noexcept { return kind_; }
    double theta() const noexcept { return theta_; }
    const CubicSpline& table() const noexcept { return table_; }

    double f(double u) const {
        if (kind_ == NonlinearityKind::Cubic) return u * (1.0 - u) * (u - theta_);
        return table_(u);
    }

    double f_prime(double u) const {
        if (kind_ == NonlinearityKind::Cubic) return -3.0 * u * u + 2.0 * (1.0 + theta_) * u - theta_;
        return table_.derivative(u);
    }

private:
    NonlinearityKind kind_ = NonlinearityKind::Cubic;
    double theta_ = 0.25;
    CubicSpline table_;
};

inline double eval_f(const Nonlinearity& n, double u) { return n.f(u); }
inline double eval_f_prime(const Nonlinearity& n, double u) { return n.f_prime(u); }

/// max over [0, 1] of |f'|: dense sampling followed by golden-section
/// refinement around the best sample.
inline double sup_norm_f_prime(const Nonlinearity& n) {
    constexpr int samples = 10000;
    auto g = [&](double u) { return std::abs(n.f_prime(u)); };
    int best = 0;
    double best_val = g(0.0);
    for (int i = 1; i <= samples; ++i) {
        const double v = g(double(i) / samples);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double lo = std::max(0.0, double(best - 1) / samples);
    double hi = std::min(1.0, double(best + 1) / samples);
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
    double g1 = g(x1), g2 = g(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
        if (g1 < g2) {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + ratio * (hi - lo);
            g2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - ratio * (hi - lo);
            g1 = g(x1);
        }
    }
    return std::max({best_val, g1, g2, g(0.0), g(1.0)});
}

/// Integral of f over [0, 1]. Throws NotInvading unless it is positive.
inline double integral_f(const Nonlinearity& n) {
    const double value = gauss_legendre([&](double u) { return n.f(u); }, 0.0, 1.0, 64);
    if (!(value > 0.0))
        throw Error(ErrorKind::NotInvading, "integral of f over [0,1] is " + std::to_string(value) +
                                                ", state 1 does not invade");
    return value;
}

struct HypothesisCheck {
    std::string name;
    bool pass = true;
    double witness = std::nan("");  ///< point of the first failure, NaN if none
    double value = std::nan("");
};

struct ValidationReport {
    std::vector<HypothesisCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

inline ValidationReport validate(const Nonlinearity& n) {
    ValidationReport report;
    const double theta = n.theta();
    const double zero_tol = n.kind() == NonlinearityKind::Cubic ? 1e-12 : 1e-10;

    for (const auto& [label, u] : {std::pair<const char*, double>{"f(0) = 0", 0.0},
                                   {"f(theta) = 0", theta}, {"f(1) = 0", 1.0}}) {
        HypothesisCheck c{label};
        c.value = n.f(u);
        c.pass = std::abs(c.value) <= zero_tol;
        if (!c.pass) c.witness = u;
        report.checks.push_back(c);
    }

    HypothesisCheck d0{"f'(0) < 0"};
    d0.value = n.f_prime(0.0);
    d0.pass = d0.value < 0.0;
    if (!d0.pass) d0.witness = 0.0;
    report.checks.push_back(d0);

    HypothesisCheck d1{"f'(1) < 0"};
    d1.value = n.f_prime(1.0);
    d1.pass = d1.value < 0.0;
    if (!d1.pass) d1.witness = 1.0;
    report.checks.push_back(d1);

    HypothesisCheck neg{"f < 0 on (0, theta)"};
    HypothesisCheck pos{"f > 0 on (theta, 1)"};
    constexpr int samples = 20000;
    for (int i = 1; i < samples; ++i) {
        const double u = double(i) / samples;
        if (std::abs(u - theta) < 0.5 / samples) continue;
        const double v = n.f(u);
        if (u < theta && !(v < 0.0) && neg.pass) {
            neg.pass = false;
            neg.witness = u;
            neg.value = v;
        }
        if (u > theta && !(v > 0.0) && pos.pass) {
            pos.pass = false;
            pos.witness = u;
            pos.value = v;
        }
    }
    report.checks.push_back(neg);
    report.checks.push_back(pos);

    HypothesisCheck inv{"integral of f > 0"};
    inv.value = gauss_legendre([&](double u) { return n.f(u); }, 0.0, 1.0, 64);
    inv.pass = inv.value > 0.0;
    report.checks.push_back(inv);
    return report;
}

}  // namespace frontlab
