#pragma once

#include "frontlab/core/banded.hpp"
#include "frontlab/core/error.hpp"
#include "frontlab/core/fit.hpp"
#include "frontlab/core/quadrature.hpp"
#include "frontlab/nonlinearity.hpp"
#include "frontlab/wave.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace frontlab {

/// Pairing with the adjoint kernel element, <e*, psi> = (1/Lambda) int e^{c xi} phi' psi,
/// and the projectors P = <e*, .> phi', Q = I - P on the wave grid.
struct ProjectionContext {
    std::shared_ptr<const WaveProfile> profile;
    Quadrature quadrature = Quadrature::Trapezoid;
    std::vector<double> weight;  ///< e^{c xi} phi'(xi) at the nodes
    std::vector<double> quad;    ///< quadrature weights
    double Lambda = 0.0;

    std::size_t size() const { return weight.size(); }
    double c() const { return profile->c; }
    double h() const { return profile->grid.h(); }
    const std::vector<double>& xi() const { return profile->xi; }
    const std::vector<double>& phi_prime() const { return profile->phi_prime; }
};

namespace detail {

inline void check_shape(const ProjectionContext& ctx, std::span<const double> psi) {
    if (psi.size() != ctx.size())
        throw Error(ErrorKind::ShapeMismatch, "grid function has " + std::to_string(psi.size()) +
                                                  " values, wave grid has " + std::to_string(ctx.size()));
}

inline double raw_pairing(const ProjectionContext& ctx, std::span<const double> psi) {
    double acc = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) acc += ctx.quad[i] * ctx.weight[i] * psi[i];
    return acc;
}

}  // namespace detail

inline ProjectionContext build_projection(std::shared_ptr<const WaveProfile> profile,
                                          Quadrature rule = Quadrature::Trapezoid) {
    ProjectionContext ctx;
    ctx.profile = std::move(profile);
    ctx.quadrature = rule;
    const auto& p = *ctx.profile;
    ctx.weight.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) ctx.weight[i] = std::exp(p.c * p.xi[i]) * p.phi_prime[i];
    ctx.quad = quadrature_weights(p.size(), p.grid.h(), rule);
    ctx.Lambda = detail::raw_pairing(ctx, p.phi_prime);
    return ctx;
}

inline ProjectionContext build_projection(const WaveProfile& profile, Quadrature rule = Quadrature::Trapezoid) {
    return build_projection(std::make_shared<const WaveProfile>(profile), rule);
}

inline double pair_e_star(const ProjectionContext& ctx, std::span<const double> psi) {
    detail::check_shape(ctx, psi);
    return detail::raw_pairing(ctx, psi) / ctx.Lambda;
}

inline std::vector<double> project_kernel(const ProjectionContext& ctx, std::span<const double> psi) {
    const double a = pair_e_star(ctx, psi);
    std::vector<double> out(ctx.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * ctx.phi_prime()[i];
    return out;
}

inline std::vector<double> project_range(const ProjectionContext& ctx, std::span<const double> psi) {
    const double a = pair_e_star(ctx, psi);
    std::vector<double> out(psi.begin(), psi.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= a * ctx.phi_prime()[i];
    return out;
}

/// -w'' + (c^2/4 - f'(phi)) w on the interior nodes, Dirichlet at both ends.
struct SymmetrizedOperator {
    SymTridiag matrix;
    std::vector<double> xi;         ///< interior nodes
    std::vector<double> potential;  ///< c^2/4 - f'(phi) at the interior nodes
    double h = 0.0;
};

inline SymmetrizedOperator symmetrized_operator(const WaveProfile& p) {
    const std::size_t n = p.size();
    if (n < 5) throw Error(ErrorKind::ValidationError, "profile grid too small for the eigenproblem");
    const double h = p.grid.h();
    SymmetrizedOperator op;
    op.h = h;
    const std::size_t m = n - 2;
    op.matrix.diag.resize(m);
    op.matrix.off.assign(m - 1, -1.0 / (h * h));
    op.xi.resize(m);
    op.potential.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = k + 1;
        op.xi[k] = p.xi[i];
        op.potential[k] = 0.25 * p.c * p.c - p.nonlinearity.f_prime(p.phi[i]);
        op.matrix.diag[k] = 2.0 / (h * h) + op.potential[k];
    }
    return op;
}

/// Number of eigenvalues of a symmetric tridiagonal matrix below x.
inline std::size_t sturm_count(const SymTridiag& a, double x) {
    std::size_t count = 0;
    double d = a.diag[0] - x;
    if (d < 0.0) ++count;
    for (std::size_t i = 1; i < a.size(); ++i) {
        if (d == 0.0) d = 1e-300;
        d = a.diag[i] - x - a.off[i - 1] * a.off[i - 1] / d;
        if (d < 0.0) ++count;
    }
    return count;
}

/// k-th smallest eigenvalue (k = 0, 1, ...) by Sturm bisection.
inline double tridiagonal_eigenvalue(const SymTridiag& a, std::size_t k) {
    double lo = a.diag[0], hi = a.diag[0];
    for (std::size_t i = 0; i < a.size(); ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(a.off[i - 1]);
        if (i + 1 < a.size()) r += std::abs(a.off[i]);
        lo = std::min(lo, a.diag[i] - r);
        hi = std::max(hi, a.diag[i] + r);
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(a, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

/// Solves a general tridiagonal system with partial pivoting.
inline void solve_tridiagonal_pivoted(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup,
                                      std::span<double> b) {
    const std::size_t n = diag.size();
    std::vector<double> sup2(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(diag[i]) >= std::abs(sub[i])) {
            if (diag[i] == 0.0) diag[i] = 1e-300;
            const double m = sub[i] / diag[i];
            diag[i + 1] -= m * sup[i];
            b[i + 1] -= m * b[i];
            sub[i] = 0.0;
        } else {
            const double m = diag[i] / sub[i];
            diag[i] = sub[i];
            std::swap(b[i], b[i + 1]);
            b[i + 1] -= m * b[i];
            const double t = diag[i + 1];
            diag[i + 1] = sup[i] - m * t;
            sup[i] = t;
            if (i + 2 < n) {
                sup2[i] = sup[i + 1];
                sup[i + 1] = -m * sup[i + 1];
            }
        }
    }
    if (diag[n - 1] == 0.0) diag[n - 1] = 1e-300;
    b[n - 1] /= diag[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - sup[n - 2] * b[n - 1]) / diag[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - sup[i] * b[i + 1] - sup2[i] * b[i + 2]) / diag[i];
}

/// Unit eigenvector for eigenvalue `value` by shifted inverse iteration.
inline std::vector<double> tridiagonal_eigenvector(const SymTridiag& a, double value) {
    const std::size_t n = a.size();
    const double shift = value - 1e-10 * std::max(1.0, std::abs(value));
    std::vector<double> sub(a.off), sup(a.off), diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a.diag[i] - shift;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * std::sin(1.3 * double(i));
    for (int it = 0; it < 4; ++it) {
        solve_tridiagonal_pivoted(sub, diag, sup, x);
        double norm = 0.0;
        for (double v : x) norm += v * v;
        norm = std::sqrt(norm);
        for (double& v : x) v /= norm;
    }
    // Fix the sign so the largest component is positive.
    std::size_t imax = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
    if (x[imax] < 0.0)
        for (double& v : x) v = -v;
    return x;
}

struct SpectralReport {
    double rho0 = 0.0;      ///< ground eigenvalue (zero in the continuum)
    double lambda2 = 0.0;   ///< second eigenvalue of the discrete operator
    double rho1 = 0.0;      ///< spectral gap lambda2 - rho0
    double varpi = 0.0;     ///< rho1 / sup |f'|
    double sup_f_prime = 0.0;
    double ground_cosine = 0.0;  ///< cosine between ground vector and e^{c xi/2} phi'
    double h = 0.0, xi_min = 0.0, xi_max = 0.0;
    std::vector<double> ground_vector;
    std::vector<double> second_vector;
};

inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    return ab / std::sqrt(aa * bb);
}

/// e^{c xi/2} phi' on the interior nodes: the conjugated translation mode.
inline std::vector<double> conjugated_kernel_mode(const WaveProfile& p) {
    std::vector<double> g(p.size() - 2);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = std::exp(0.5 * p.c * p.xi[k + 1]) * p.phi_prime[k + 1];
    return g;
}

inline SpectralReport spectral_gap(const WaveProfile& p) {
    const auto op = symmetrized_operator(p);
    SpectralReport rep;
    rep.h = p.grid.h();
    rep.xi_min = p.grid.xi_min;
    rep.xi_max = p.grid.xi_max;
    rep.rho0 = tridiagonal_eigenvalue(op.matrix, 0);
    rep.lambda2 = tridiagonal_eigenvalue(op.matrix, 1);
    rep.rho1 = rep.lambda2 - rep.rho0;
    rep.sup_f_prime = sup_norm_f_prime(p.nonlinearity);
    rep.varpi = rep.rho1 / rep.sup_f_prime;
    rep.ground_vector = tridiagonal_eigenvector(op.matrix, rep.rho0);
    rep.second_vector = tridiagonal_eigenvector(op.matrix, rep.lambda2);
    rep.ground_cosine = std::abs(cosine_similarity(rep.ground_vector, conjugated_kernel_mode(p)));
    if (!(rep.rho1 > 0.0))
        throw Error(ErrorKind::DegenerateGap, "spectral gap is not positive: " + std::to_string(rep.rho1));
    return rep;
}

/// Discrete Rayleigh quotient w^T A w / w^T w, the grid form of
/// (int w'^2 + int V w^2) / int w^2.
inline double rayleigh_quotient(const SymmetrizedOperator& op, std::span<const double> w) {
    std::vector<double> aw(w.size());
    op.matrix.multiply(w, aw);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        num += w[i] * aw[i];
        den += w[i] * w[i];
    }
    return num / den;
}

struct CoercivityReport {
    std::size_t samples = 0;
    double min_quotient = 0.0;
    double min_slack = 0.0;  ///< min over samples of quotient - lambda2
    struct Threshold {
        double zeta;
        double amplitude;  ///< -(rho1 - zeta) / sup|f'|
    };
    std::vector<Threshold> thresholds;
    bool pass = false;
};

/// Rayleigh-quotient check over random w orthogonal to the ground mode.
inline CoercivityReport coercivity_check(const WaveProfile& p, const SpectralReport& gap,
                                         std::span<const double> zeta_grid, std::size_t samples = 100,
                                         std::uint64_t seed = 1) {
    const auto op = symmetrized_operator(p);
    const std::size_t m = op.matrix.size();
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    CoercivityReport rep;
    rep.samples = samples;
    rep.min_quotient = std::numeric_limits<double>::infinity();
    rep.min_slack = std::numeric_limits<double>::infinity();
    const auto& g0 = gap.ground_vector;
    const double pi = 3.14159265358979323846;
    for (std::size_t s = 0; s < samples; ++s) {
        std::vector<double> w(m, 0.0);
        const int modes = 1 + static_cast<int>(s % 40);
        for (int k = 1; k <= modes; ++k) {
            const double a = normal(gen) / k;
            for (std::size_t i = 0; i < m; ++i) w[i] += a * std::sin(k * pi * double(i + 1) / double(m + 1));
        }
        // Half of the samples are concentrated near the second mode.
        if (s % 2 == 1) {
            const double a = 10.0 * (1.0 + std::abs(normal(gen)));
            for (std::size_t i = 0; i < m; ++i) w[i] = a * gap.second_vector[i] + 0.01 * w[i];
        }
        double proj = 0.0;
        for (std::size_t i = 0; i < m; ++i) proj += w[i] * g0[i];
        for (std::size_t i = 0; i < m; ++i) w[i] -= proj * g0[i];
        const double q = rayleigh_quotient(op, w);
        rep.min_quotient = std::min(rep.min_quotient, q);
        rep.min_slack = std::min(rep.min_slack, q - gap.lambda2);
    }
    for (double z : zeta_grid) rep.thresholds.push_back({z, -(gap.rho1 - z) / gap.sup_f_prime});
    rep.pass = rep.min_slack >= -1e-8 * std::max(1.0, std::abs(gap.lambda2));
    return rep;
}

struct DecayCheckReport {
    std::vector<double> times;
    std::vector<double> norm;        ///< sup norm of v(t)
    std::vector<double> range_norm;  ///< sup norm of Q v(t)
    double fitted_rate = std::numeric_limits<double>::quiet_NaN();
    double r_squared = std::numeric_limits<double>::quiet_NaN();
    bool identically_zero = false;
    bool pass = false;
};

/// Evolves dv/dt = v'' + c v' + f'(phi) v (Crank-Nicolson, Dirichlet ends,
/// same three-point stencil as the symmetrized operator) and fits the decay
/// rate of |Q v(t)|_inf over the second half of the run.
inline DecayCheckReport semigroup_decay_check(const ProjectionContext& ctx, double rho, std::span<const double> v0,
                                              double t_end = 40.0, double dt = 0.02) {
    detail::check_shape(ctx, v0);
    const auto& p = *ctx.profile;
    const std::size_t n = p.size();
    const double h = p.grid.h(), c = p.c;
    DecayCheckReport rep;

    const std::size_t m = n - 2;
    std::vector<double> lo(m - 1), di(m), up(m - 1);
    const double a = 1.0 / (h * h), b = c / (2.0 * h);
    std::vector<double> fp(n);
    for (std::size_t i = 0; i < n; ++i) fp[i] = p.nonlinearity.f_prime(p.phi[i]);
    for (std::size_t k = 0; k < m; ++k) {
        di[k] = 1.0 - 0.5 * dt * (-2.0 * a + fp[k + 1]);
        if (k + 1 < m) {
            up[k] = -0.5 * dt * (a + b);
            lo[k] = -0.5 * dt * (a - b);
        }
    }

    std::vector<double> v(v0.begin(), v0.end());
    v.front() = v.back() = 0.0;
    auto record = [&](double t) {
        rep.times.push_back(t);
        rep.norm.push_back(max_abs(v));
        rep.range_norm.push_back(max_abs(project_range(ctx, v)));
    };
    record(0.0);
    const int steps = static_cast<int>(std::lround(t_end / dt));
    std::vector<double> rhs(m);
    for (int s = 1; s <= steps; ++s) {
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t i = k + 1;
            const double lv = a * (v[i - 1] - 2.0 * v[i] + v[i + 1]) + b * (v[i + 1] - v[i - 1]) + fp[i] * v[i];
            rhs[k] = v[i] + 0.5 * dt * lv;
        }
        solve_tridiagonal(lo, di, up, rhs);
        for (std::size_t k = 0; k < m; ++k) v[k + 1] = rhs[k];
        if (s % 10 == 0 || s == steps) record(s * dt);
    }

    if (rep.norm.front() == 0.0) {
        rep.identically_zero = max_abs(v) == 0.0;
        rep.pass = rep.identically_zero;
        return rep;
    }
    std::vector<double> ts, ls;
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        if (rep.times[i] < 0.5 * t_end || !(rep.range_norm[i] > 0.0)) continue;
        ts.push_back(rep.times[i]);
        ls.push_back(std::log(rep.range_norm[i]));
    }
    const auto fit = fit_line(ts, ls);
    rep.fitted_rate = -fit.slope;
    rep.r_squared = fit.r_squared;
    rep.pass = rep.fitted_rate >= rho;
    return rep;
}

}  // namespace frontlab
