#pragma once

#include "frontlab/core/error.hpp"
#include "frontlab/nonlinearity.hpp"
#include "frontlab/sim2d/domain.hpp"
#include "frontlab/sim2d/mapped.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace frontlab {

/// Monotone C^2 cutoff: g(s) = s on [0, r], r + r H((s - r)/r) on [r, 2r],
/// and 3r/2 beyond 2r. H is the quintic Hermite interpolant of
/// (H, H', H'') = (0, 1, 0) at t = 0 and (1/2, 0, 0) at t = 1, which works out
/// to t - t^3 + t^4/2. Then 0 <= g' <= 1 and |g''| <= 3/(2r).
struct Cutoff {
    double r = 0.2;

    double value(double s) const {
        if (s <= r) return s;
        if (s >= 2 * r) return 1.5 * r;
        const double t = (s - r) / r;
        return r + r * (t - t * t * t + 0.5 * t * t * t * t);
    }
    double slope(double s) const {
        if (s <= r) return 1.0;
        if (s >= 2 * r) return 0.0;
        const double t = (s - r) / r;
        return 1.0 - 3 * t * t + 2 * t * t * t;
    }
    double curvature(double s) const {
        if (s <= r || s >= 2 * r) return 0.0;
        const double t = (s - r) / r;
        return (-6 * t + 6 * t * t) / r;
    }
};

struct Supersolution2D {
    std::vector<double> psi;  ///< on the mapped grid
    double alpha = 0.0;
    double a = 0.0;
    double r = 0.0;
    double epsilon = 0.0;
    double delta = 0.0;
    double c = 0.0;
};

/// omega(alpha)^2 = alpha c - alpha^2 - f'(0) - delta.
inline double omega_squared(double alpha, double c, double fp0, double delta) {
    return alpha * c - alpha * alpha - fp0 - delta;
}

/// Upper root of omega(alpha)^2 = -f'(0)/2.
inline double alpha_one(double c, double fp0, double delta) {
    const double q = 0.5 * fp0 + delta;
    return 0.5 * (c + std::sqrt(c * c - 4.0 * q));
}

/// Bounds used by the construction for a domain with maximal curvature k:
/// the C^2 norm of the distance on the collar and sup |Laplacian psi|.
struct CollarBounds {
    double d_C2 = 0.0;
    double lap_psi = 0.0;
};

inline CollarBounds collar_bounds(const DomainSpec2D& d, double r) {
    const double k = d.max_curvature;
    const double hess = k / (1.0 - 2.0 * r * k);
    return {2.0 * r + 1.0 + hess, 1.5 / r + hess};
}

/// Largest u* with f(u) <= (f'(0) + delta) u on [0, u*], found by scanning.
inline double linear_bound_range(const Nonlinearity& nl, double delta) {
    const double fp0 = nl.f_prime(0.0);
    const int n = 100000;
    for (int k = 1; k <= n; ++k) {
        const double u = nl.theta() * double(k) / n;
        if (nl.f(u) > (fp0 + delta) * u) return nl.theta() * double(k - 1) / n;
    }
    return nl.theta();
}

struct SupersolutionParams {
    double alpha = 0.0;
    double a = 0.0;
    double r = 0.2;
    double epsilon = 0.0;
    double delta = 0.0;
};

/// Picks (alpha, a, epsilon) satisfying every precondition with a margin:
/// a above both lower bounds, alpha at half of its upper bounds, epsilon so
/// that the super-solution stays where f is below its linearization plus delta.
inline SupersolutionParams derive_supersolution_parameters(const DomainSpec2D& d, const Nonlinearity& nl, double c,
                                                           double r, double delta = -1.0) {
    const double fp0 = nl.f_prime(0.0);
    if (delta < 0.0) delta = 0.25 * std::abs(fp0);
    const auto cb = collar_bounds(d, r);
    SupersolutionParams p;
    p.r = r;
    p.delta = delta;
    const double a1 = alpha_one(c, fp0, delta);
    p.alpha = 0.5 * a1;
    for (int it = 0; it < 100; ++it) {
        const double w2 = omega_squared(p.alpha, c, fp0, delta);
        p.a = 1.1 * std::max(-4.0 * cb.d_C2 / fp0, (cb.lap_psi + 2.0 * p.alpha) / w2);
        const double next = std::min(0.5 * a1, 0.5 / (p.a + 1.5 * r));
        if (std::abs(next - p.alpha) <= 1e-15) break;
        p.alpha = next;
    }
    p.epsilon = 0.9 * linear_bound_range(nl, delta) / (p.a + 1.5 * r);
    return p;
}

/// psi = 3r/2 - g(dist) + a, evaluated on the mapped grid. With `enforce`
/// the preconditions are checked and violations raise ParameterViolation.
inline Supersolution2D build_supersolution(const DomainSpec2D& d, const MappedGrid& g, const Nonlinearity& nl,
                                           double c, const SupersolutionParams& p, bool enforce = true) {
    const double fp0 = nl.f_prime(0.0);
    if (enforce) {
        std::string failed;
        auto need = [&](bool ok, const std::string& what) {
            if (!ok) failed += (failed.empty() ? "" : "; ") + what;
        };
        const auto cb = collar_bounds(d, p.r);
        need(p.alpha > 0.0, "alpha > 0");
        need(p.delta > 0.0, "delta > 0");
        need(p.epsilon > 0.0, "epsilon > 0");
        need(p.r > 0.0 && p.r <= d.r_ball, "0 < r <= r_ball");
        need(4.0 * p.r < d.min_width, "4r < minimal width");
        need(p.alpha <= alpha_one(c, fp0, p.delta), "alpha <= alpha_1");
        need(p.a > -4.0 * cb.d_C2 / fp0, "a > -4 ||d||_C2 / f'(0)");
        need(p.alpha < 1.0 / (p.a + 1.5 * p.r), "alpha < 1/(a + 3r/2)");
        if (!failed.empty()) throw Error(ErrorKind::ParameterViolation, "super-solution preconditions: " + failed);
    }
    Supersolution2D ss;
    ss.alpha = p.alpha;
    ss.a = p.a;
    ss.r = p.r;
    ss.epsilon = p.epsilon;
    ss.delta = p.delta;
    ss.c = c;
    ss.psi.resize(g.size());
    const Cutoff cut{p.r};
    for (std::size_t i = 0; i < g.nx; ++i)
        for (std::size_t j = 0; j < g.nz; ++j) {
            double dist = 0.0;
            if (j > 0 && j + 1 < g.nz) dist = distance_to_boundary(d, g.x(i), g.y(i, j)).distance;
            ss.psi[g.idx(i, j)] = 1.5 * p.r - cut.value(dist) + p.a;
        }
    return ss;
}

struct SupersolutionCheck {
    double min_slack_interior = std::numeric_limits<double>::infinity();
    double min_slack_boundary = std::numeric_limits<double>::infinity();
    std::size_t interior_nodes = 0;
    std::size_t boundary_nodes = 0;
    bool pass = false;
};

/// Evaluates d_t u - Laplacian u - f(u) for u = eps psi e^{-alpha (x - c t)}
/// at interior nodes with x > c t, and the outward normal derivative of u at
/// wall nodes with x > c t. Pass iff both minima are >= -1e-8.
inline SupersolutionCheck verify_supersolution(const MappedGrid& g, const Supersolution2D& ss, const Nonlinearity& nl,
                                               double t) {
    const auto lap = apply_mapped_laplacian(g, ss.psi);
    SupersolutionCheck out;
    const double c = ss.c, al = ss.alpha;
    for (std::size_t i = 1; i + 1 < g.nx; ++i) {
        const double x = g.x(i);
        if (!(x > c * t)) continue;
        const double E = ss.epsilon * std::exp(-al * (x - c * t));
        for (std::size_t j = 1; j + 1 < g.nz; ++j) {
            const std::size_t k = g.idx(i, j);
            const auto dv = interior_derivatives(g, ss.psi, i, j);
            const double psi_x = dv.ux + g.zx[k] * dv.uz;
            const double psi = ss.psi[k];
            const double ubar = E * psi;
            const double N = E * (al * c * psi - lap[k] + 2.0 * al * psi_x - al * al * psi) - nl.f(ubar);
            out.min_slack_interior = std::min(out.min_slack_interior, N);
            ++out.interior_nodes;
        }
    }
    for (Wall wall : {Wall::Lower, Wall::Upper}) {
        const auto dn = apply_neumann_mapped(g, ss.psi, wall);
        const std::size_t j = wall == Wall::Lower ? 0 : g.nz - 1;
        for (std::size_t i = 1; i + 1 < g.nx; ++i) {
            const double x = g.x(i);
            if (!(x > c * t)) continue;
            const double b1 = wall == Wall::Lower ? g.bm1[i] : g.bp1[i];
            const double nu_x = (wall == Wall::Lower ? b1 : -b1) / std::sqrt(1.0 + b1 * b1);
            const double E = ss.epsilon * std::exp(-al * (x - c * t));
            const double slack = E * (dn[i] - al * ss.psi[g.idx(i, j)] * nu_x);
            out.min_slack_boundary = std::min(out.min_slack_boundary, slack);
            ++out.boundary_nodes;
        }
    }
    out.pass = out.min_slack_interior >= -1e-8 && out.min_slack_boundary >= -1e-8;
    return out;
}

}  // namespace frontlab
