#pragma once

#include "frontlab/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace frontlab {

enum class TermKind { Sigmoid, Bump };

/// Sigmoid: amplitude / (1 + e^{-rate (x - center)}).
/// Bump: amplitude * e^{-rate (x - center)^2}.
struct BoundaryTerm {
    TermKind kind = TermKind::Sigmoid;
    double amplitude = 0.0;
    double rate = 1.0;
    double center = 0.0;

    /// Value and first three derivatives at x.
    void eval(double x, double out[4]) const {
        const double a = amplitude;
        if (kind == TermKind::Sigmoid) {
            const double z = rate * (x - center);
            // s = 1/(1+e^{-z}) written to stay finite for large |z|.
            const double s = z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
            const double s1 = s * (1 - s);
            const double s2 = s1 * (1 - 2 * s);
            const double s3 = s1 * (1 - 6 * s + 6 * s * s);
            out[0] = a * s;
            out[1] = a * rate * s1;
            out[2] = a * rate * rate * s2;
            out[3] = a * rate * rate * rate * s3;
        } else {
            const double u = x - center;
            const double e = std::exp(-rate * u * u);
            const double k = rate;
            out[0] = a * e;
            out[1] = a * e * (-2 * k * u);
            out[2] = a * e * (4 * k * k * u * u - 2 * k);
            out[3] = a * e * (-8 * k * k * k * u * u * u + 12 * k * k * u);
        }
    }
};

/// y = limit + sum of terms; `limit` is the value at x -> -infinity.
struct BoundaryGraph {
    double limit = 0.0;
    std::vector<BoundaryTerm> terms;

    static BoundaryGraph flat(double y) { return {y, {}}; }
    static BoundaryGraph sigmoid(double limit, double amplitude, double rate, double center) {
        return {limit, {{TermKind::Sigmoid, amplitude, rate, center}}};
    }

    /// Value and derivatives up to order `order` (at most 3).
    void eval(double x, double out[4]) const {
        out[0] = limit;
        out[1] = out[2] = out[3] = 0.0;
        double t[4];
        for (const auto& term : terms) {
            term.eval(x, t);
            for (int k = 0; k < 4; ++k) out[k] += t[k];
        }
    }
    double value(double x) const {
        double o[4];
        eval(x, o);
        return o[0];
    }
    double d1(double x) const {
        double o[4];
        eval(x, o);
        return o[1];
    }
    double d2(double x) const {
        double o[4];
        eval(x, o);
        return o[2];
    }
    /// Exponential rate at which the graph reaches its limit as x -> -infinity.
    double approach_rate() const {
        double rate = std::numeric_limits<double>::infinity();
        for (const auto& t : terms)
            if (t.kind == TermKind::Sigmoid && t.amplitude != 0.0) rate = std::min(rate, t.rate);
        return rate;
    }
    double curvature(double x) const {
        double o[4];
        eval(x, o);
        return std::abs(o[2]) / std::pow(1.0 + o[1] * o[1], 1.5);
    }
};

struct DomainParams {
    BoundaryGraph b_minus = BoundaryGraph::flat(0.0);
    BoundaryGraph b_plus = BoundaryGraph::flat(1.0);
    double kappa = 0.25;
    double r_ball = 0.2;
    double width_min = 0.05;
    double x_lo = -60.0;  ///< computational range checked at construction
    double x_hi = 60.0;
};

struct DomainSpec2D {
    BoundaryGraph b_minus, b_plus;
    double kappa = 0.25;
    double r_ball = 0.2;
    double width_min = 0.0;
    double x_lo = 0.0, x_hi = 0.0;
    double omega_lo = 0.0, omega_hi = 1.0;  ///< limit section at -infinity
    double envelope_C = 0.0;                ///< sampled constant of the e^{kappa x} envelope
    double min_width = 0.0;                 ///< sampled minimum of b+ - b-
    double max_curvature = 0.0;

    double width(double x) const { return b_plus.value(x) - b_minus.value(x); }
    bool straight() const { return b_minus.terms.empty() && b_plus.terms.empty(); }
};

/// Largest r_ball accepted by the curvature check for these graphs on [x_lo, x_hi].
inline double admissible_ball_radius(const BoundaryGraph& lo, const BoundaryGraph& hi, double x_lo, double x_hi,
                                     int samples = 10000) {
    double kmax = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double x = x_lo + (x_hi - x_lo) * k / double(samples - 1);
        kmax = std::max({kmax, lo.curvature(x), hi.curvature(x)});
    }
    return kmax > 0.0 ? 1.0 / (3.0 * kmax) : std::numeric_limits<double>::infinity();
}

/// Validates the boundary graphs on a 10^4-point sample of [x_lo, x_hi].
inline DomainSpec2D build_domain(const DomainParams& p) {
    if (!(p.x_hi > p.x_lo)) throw Error(ErrorKind::ValidationError, "x_hi must exceed x_lo", "domain.x_hi");
    if (!(p.kappa > 0.0)) throw Error(ErrorKind::ValidationError, "kappa must be positive", "domain.kappa");
    if (!(p.r_ball > 0.0)) throw Error(ErrorKind::ValidationError, "r_ball must be positive", "domain.r_ball");

    DomainSpec2D d;
    d.b_minus = p.b_minus;
    d.b_plus = p.b_plus;
    d.kappa = p.kappa;
    d.r_ball = p.r_ball;
    d.width_min = p.width_min;
    d.x_lo = p.x_lo;
    d.x_hi = p.x_hi;
    d.omega_lo = p.b_minus.limit;
    d.omega_hi = p.b_plus.limit;
    if (!(d.omega_hi - d.omega_lo > p.width_min))
        throw Error(ErrorKind::PinchedDomain, "limit section is narrower than width_min", "domain.b_plus.limit");

    for (const auto* g : {&p.b_minus, &p.b_plus}) {
        const std::string side = g == &p.b_minus ? "domain.b_minus" : "domain.b_plus";
        if (g->approach_rate() < p.kappa)
            throw Error(ErrorKind::EnvelopeViolation,
                        "a sigmoid term reaches the limit at rate " + std::to_string(g->approach_rate()) +
                            " < kappa = " + std::to_string(p.kappa),
                        side + ".rate");
    }

    const int samples = 10000;
    d.min_width = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const double x = p.x_lo + (p.x_hi - p.x_lo) * k / double(samples - 1);
        double lo[4], hi[4];
        p.b_minus.eval(x, lo);
        p.b_plus.eval(x, hi);
        const double w = hi[0] - lo[0];
        d.min_width = std::min(d.min_width, w);
        if (!(w >= p.width_min))
            throw Error(ErrorKind::PinchedDomain,
                        "b+ - b- = " + std::to_string(w) + " < width_min at x = " + std::to_string(x), "domain");
        d.max_curvature = std::max({d.max_curvature, p.b_minus.curvature(x), p.b_plus.curvature(x)});
        if (x <= 0.0) {
            const double dev = std::max({std::abs(lo[0] - p.b_minus.limit), std::abs(lo[1]), std::abs(lo[2]),
                                         std::abs(hi[0] - p.b_plus.limit), std::abs(hi[1]), std::abs(hi[2])});
            d.envelope_C = std::max(d.envelope_C, dev * std::exp(-p.kappa * x));
        }
    }
    if (d.max_curvature > 1.0 / (3.0 * p.r_ball))
        throw Error(ErrorKind::SphereConditionFail,
                    "boundary curvature " + std::to_string(d.max_curvature) + " exceeds 1/(3 r_ball) = " +
                        std::to_string(1.0 / (3.0 * p.r_ball)),
                    "domain.r_ball");
    return d;
}

struct BoundaryPoint {
    double distance = 0.0;
    double s = 0.0;      ///< abscissa of the nearest boundary point
    bool upper = false;  ///< nearest point lies on b+
};

namespace detail {

/// Nearest point on y = b(s) to (x, y) by damped Newton on the stationarity
/// condition (s - x) + (b(s) - y) b'(s) = 0, started at s = x.
inline BoundaryPoint project_on_graph(const BoundaryGraph& b, double x, double y) {
    auto dist2 = [&](double s) {
        const double dy = b.value(s) - y;
        return (s - x) * (s - x) + dy * dy;
    };
    double s = x;
    for (int it = 0; it < 100; ++it) {
        double o[4];
        b.eval(s, o);
        const double g = (s - x) + (o[0] - y) * o[1];
        const double H = 1.0 + o[1] * o[1] + (o[0] - y) * o[2];
        double step = H > 0.0 ? -g / H : -g;
        const double d0 = dist2(s);
        while (dist2(s + step) > d0 && std::abs(step) > 1e-16) step *= 0.5;
        s += step;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(s))) break;
    }
    return {std::sqrt(dist2(s)), s, false};
}

}  // namespace detail

/// Distance from an interior point to the nearer boundary graph.
inline BoundaryPoint distance_to_boundary(const DomainSpec2D& d, double x, double y) {
    if (!(y > d.b_minus.value(x) && y < d.b_plus.value(x)))
        throw Error(ErrorKind::OutsideDomain,
                    "point (" + std::to_string(x) + ", " + std::to_string(y) + ") is not inside the domain");
    auto lo = detail::project_on_graph(d.b_minus, x, y);
    auto hi = detail::project_on_graph(d.b_plus, x, y);
    hi.upper = true;
    return lo.distance <= hi.distance ? lo : hi;
}

}  // namespace frontlab
