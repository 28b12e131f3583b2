#pragma once

#include "frontlab/core/error.hpp"
#include "frontlab/core/fit.hpp"
#include "frontlab/core/interpolation.hpp"
#include "frontlab/nonlinearity.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace frontlab {

/// Uniform grid on [xi_min, xi_max] that contains xi = 0 as a node.
struct WaveGrid {
    double xi_min = -40.0;
    double xi_max = 40.0;
    std::size_t n_points = 8001;

    double h() const { return (xi_max - xi_min) / double(n_points - 1); }
    double node(std::size_t i) const { return xi_min + double(i) * h(); }
    std::size_t zero_index() const { return static_cast<std::size_t>(std::lround(-xi_min / h())); }

    /// Grid with spacing close to h whose bounds are snapped to multiples of
    /// it, so that 0 is a node.
    static WaveGrid make(double xi_min, double xi_max, double h) {
        if (!(xi_min < 0.0 && xi_max > 0.0))
            throw Error(ErrorKind::ValidationError, "wave grid needs xi_min < 0 < xi_max", "wave.xi_min");
        if (!(h > 0.0)) throw Error(ErrorKind::ValidationError, "wave grid spacing must be positive", "wave.h");
        const long left = std::lround(-xi_min / h);
        const long right = std::lround(xi_max / h);
        if (left < 1 || right < 1)
            throw Error(ErrorKind::ValidationError, "wave grid spacing too coarse", "wave.h");
        WaveGrid g;
        g.xi_min = -double(left) * h;
        g.xi_max = double(right) * h;
        g.n_points = static_cast<std::size_t>(left + right + 1);
        return g;
    }
};

struct WaveProfile {
    WaveGrid grid;
    Nonlinearity nonlinearity = Nonlinearity::cubic(0.25);
    std::vector<double> xi;
    std::vector<double> phi;
    std::vector<double> phi_prime;
    double c = 0.0;
    double lambda = 0.0;  ///< decay rate of phi at +infinity (negative)
    double mu = 0.0;      ///< decay rate of 1 - phi at -infinity (positive)
    double residual_inf = 0.0;
    int newton_iterations = 0;

    double theta() const { return nonlinearity.theta(); }
    std::size_t size() const { return phi.size(); }
};

struct DecayRates {
    double lambda;
    double mu;
};

inline DecayRates decay_rates(double fp0, double fp1, double c) {
    return {0.5 * (-c - std::sqrt(c * c - 4.0 * fp0)), 0.5 * (-c + std::sqrt(c * c - 4.0 * fp1))};
}

inline DecayRates decay_rates(const Nonlinearity& n, double c) {
    return decay_rates(n.f_prime(0.0), n.f_prime(1.0), c);
}

namespace detail {

inline void fill_derivative(WaveProfile& p) {
    const std::size_t n = p.phi.size();
    const double h = p.grid.h();
    const auto& u = p.phi;
    p.phi_prime.assign(n, 0.0);
    for (std::size_t i = 2; i + 2 < n; ++i)
        p.phi_prime[i] = (-u[i + 2] + 8.0 * u[i + 1] - 8.0 * u[i - 1] + u[i - 2]) / (12.0 * h);
    p.phi_prime[1] = (u[2] - u[0]) / (2.0 * h);
    p.phi_prime[n - 2] = (u[n - 1] - u[n - 3]) / (2.0 * h);
    p.phi_prime[0] = -p.mu * (1.0 - u[0]);
    p.phi_prime[n - 1] = p.lambda * u[n - 1];
}

inline std::vector<double> grid_nodes(const WaveGrid& g) {
    std::vector<double> xi(g.n_points);
    for (std::size_t i = 0; i < g.n_points; ++i) xi[i] = g.node(i);
    xi[g.zero_index()] = 0.0;
    return xi;
}

}  // namespace detail

/// Residual of phi'' + c phi' + f(phi) with the solver's stencils: five-point
/// fourth order in the interior, three-point next to the ends, and the
/// one-sided tail closures in the first and last rows.
inline std::vector<double> wave_residual(const Nonlinearity& nl, const std::vector<double>& u, double c,
                                         double h) {
    const std::size_t n = u.size();
    const auto rates = decay_rates(nl, c);
    std::vector<double> r(n, 0.0);
    r[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h) + rates.mu * (1.0 - u[0]);
    r[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h) - rates.lambda * u[n - 1];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double d2, d1;
        if (i >= 2 && i + 2 < n) {
            d2 = (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) / (12.0 * h * h);
            d1 = (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * h);
        } else {
            d2 = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / (h * h);
            d1 = (u[i + 1] - u[i - 1]) / (2.0 * h);
        }
        r[i] = d2 + c * d1 + nl.f(u[i]);
    }
    return r;
}

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

/// Closed-form wave of the cubic u(1-u)(u-theta), normalized by phi(0) = theta.
inline WaveProfile exact_cubic_wave(double theta, const WaveGrid& grid) {
    if (!(theta > 0.0 && theta < 0.5))
        throw Error(ErrorKind::ValidationError, "closed-form cubic wave needs theta in (0, 1/2)");
    WaveProfile p;
    p.grid = grid;
    p.nonlinearity = Nonlinearity::cubic(theta);
    p.xi = detail::grid_nodes(grid);
    const double s2 = std::sqrt(2.0);
    const double xi0 = -s2 * std::log((1.0 - theta) / theta);
    p.c = (1.0 - 2.0 * theta) / s2;
    const auto rates = decay_rates(p.nonlinearity, p.c);
    p.lambda = rates.lambda;
    p.mu = rates.mu;
    p.phi.resize(grid.n_points);
    p.phi_prime.resize(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double e = std::exp((p.xi[i] - xi0) / s2);
        const double v = 1.0 / (1.0 + e);
        p.phi[i] = v;
        p.phi_prime[i] = -v * (e / (1.0 + e)) / s2;
    }
    p.phi[grid.zero_index()] = theta;
    p.residual_inf = max_abs(wave_residual(p.nonlinearity, p.phi, p.c, grid.h()));
    return p;
}

struct WaveSolveOptions {
    double tol = 1e-10;
    int max_iterations = 50;
    double initial_shift = 0.0;  ///< translation applied to the initial guess
    double initial_c = std::numeric_limits<double>::quiet_NaN();
};

/// Newton solve for (phi, c) of phi'' + c phi' + f(phi) = 0 with linearized
/// tail closures phi' = -mu(1 - phi) at xi_min, phi' = lambda phi at xi_max,
/// and the phase condition phi(0) = theta.
inline WaveProfile solve_wave(const Nonlinearity& nl, const WaveGrid& grid, const WaveSolveOptions& opt = {}) {
    const std::size_t n = grid.n_points;
    if (n < 7) throw Error(ErrorKind::ValidationError, "wave grid needs at least 7 points", "wave.h");
    const double h = grid.h();
    const double theta = nl.theta();
    const std::size_t i0 = grid.zero_index();

    WaveProfile p;
    p.grid = grid;
    p.nonlinearity = nl;
    p.xi = detail::grid_nodes(grid);

    // Logistic guess with slope 1/sqrt(2), shifted so that phi(0) = theta.
    const double s2 = std::sqrt(2.0);
    const double center = -s2 * std::log((1.0 - theta) / theta) + opt.initial_shift;
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = 1.0 / (1.0 + std::exp((p.xi[i] - center) / s2));
    double c = opt.initial_c;
    if (std::isnan(c)) {
        double denom = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = -u[i] * (1.0 - u[i]) / s2;
            denom += d * d * h;
        }
        c = gauss_legendre([&](double s) { return nl.f(s); }, 0.0, 1.0, 64) / denom;
    }

    auto residual = [&](const std::vector<double>& v, double cc) {
        auto r = wave_residual(nl, v, cc, h);
        r.push_back(v[i0] - theta);
        return r;
    };

    using Sparse = Eigen::SparseMatrix<double>;
    Eigen::SparseLU<Sparse, Eigen::COLAMDOrdering<int>> lu;
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(7 * n);

    auto F = residual(u, c);
    double norm = max_abs(F);
    int iter = 0;
    bool polished = false;
    while (true) {
        if (norm <= opt.tol) {
            if (polished) break;
            polished = true;
        }
        if (iter >= opt.max_iterations)
            throw Error(ErrorKind::NoConvergence,
                        "wave Newton did not converge, last residual " + std::to_string(norm));
        ++iter;

        const double fp0 = nl.f_prime(0.0), fp1 = nl.f_prime(1.0);
        const double disc0 = std::sqrt(c * c - 4.0 * fp0), disc1 = std::sqrt(c * c - 4.0 * fp1);
        const double lam = 0.5 * (-c - disc0), mu = 0.5 * (-c + disc1);
        const double dlam = 0.5 * (-1.0 - c / disc0), dmu = 0.5 * (-1.0 + c / disc1);
        const int nc = static_cast<int>(n);

        triplets.clear();
        triplets.emplace_back(0, 0, -3.0 / (2.0 * h) - mu);
        triplets.emplace_back(0, 1, 4.0 / (2.0 * h));
        triplets.emplace_back(0, 2, -1.0 / (2.0 * h));
        triplets.emplace_back(0, nc, dmu * (1.0 - u[0]));
        triplets.emplace_back(nc - 1, nc - 1, 3.0 / (2.0 * h) - lam);
        triplets.emplace_back(nc - 1, nc - 2, -4.0 / (2.0 * h));
        triplets.emplace_back(nc - 1, nc - 3, 1.0 / (2.0 * h));
        triplets.emplace_back(nc - 1, nc, -dlam * u[n - 1]);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const int r = static_cast<int>(i);
            if (i >= 2 && i + 2 < n) {
                const double a = 1.0 / (12.0 * h * h), b = c / (12.0 * h);
                triplets.emplace_back(r, r - 2, -a + b);
                triplets.emplace_back(r, r - 1, 16.0 * a - 8.0 * b);
                triplets.emplace_back(r, r, -30.0 * a + nl.f_prime(u[i]));
                triplets.emplace_back(r, r + 1, 16.0 * a + 8.0 * b);
                triplets.emplace_back(r, r + 2, -a - b);
                triplets.emplace_back(r, nc, (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * h));
            } else {
                const double a = 1.0 / (h * h), b = c / (2.0 * h);
                triplets.emplace_back(r, r - 1, a - b);
                triplets.emplace_back(r, r, -2.0 * a + nl.f_prime(u[i]));
                triplets.emplace_back(r, r + 1, a + b);
                triplets.emplace_back(r, nc, (u[i + 1] - u[i - 1]) / (2.0 * h));
            }
        }
        triplets.emplace_back(nc, static_cast<int>(i0), 1.0);

        Sparse J(nc + 1, nc + 1);
        J.setFromTriplets(triplets.begin(), triplets.end());
        if (iter == 1) lu.analyzePattern(J);
        lu.factorize(J);
        if (lu.info() != Eigen::Success)
            throw Error(ErrorKind::NoConvergence, "singular Jacobian in wave Newton");
        Eigen::VectorXd rhs(nc + 1);
        for (int i = 0; i <= nc; ++i) rhs[i] = -F[static_cast<std::size_t>(i)];
        const Eigen::VectorXd delta = lu.solve(rhs);

        double step = 1.0;
        bool accepted = false;
        for (int k = 0; k < 30; ++k) {
            std::vector<double> trial(n);
            for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + step * delta[static_cast<int>(i)];
            const double ctrial = c + step * delta[nc];
            auto Ft = residual(trial, ctrial);
            const double nt = max_abs(Ft);
            if (std::isfinite(nt) && nt < (1.0 - 1e-4 * step) * norm) {
                u = std::move(trial);
                c = ctrial;
                F = std::move(Ft);
                norm = nt;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (norm <= opt.tol) break;  // already converged; polishing cannot improve
            throw Error(ErrorKind::NoConvergence,
                        "wave Newton stalled, last residual " + std::to_string(norm));
        }
    }

    p.phi = std::move(u);
    p.c = c;
    const auto rates = decay_rates(nl, c);
    p.lambda = rates.lambda;
    p.mu = rates.mu;
    p.residual_inf = norm;
    p.newton_iterations = iter;
    detail::fill_derivative(p);

    const double gap_left = std::abs(1.0 - p.phi.front());
    const double gap_right = std::abs(p.phi.back());
    if (gap_left > 100.0 * opt.tol || gap_right > 100.0 * opt.tol)
        throw Error(ErrorKind::GridTooShort,
                    "tails not resolved: 1 - phi(xi_min) = " + std::to_string(gap_left) +
                        ", phi(xi_max) = " + std::to_string(gap_right));
    return p;
}

struct TailReport {
    double slope_phi = 0.0;           ///< fitted rate of phi at +infinity
    double slope_one_minus_phi = 0.0;  ///< fitted rate of 1 - phi at -infinity
    double slope_dphi_right = 0.0;     ///< fitted rate of -phi' at +infinity
    double slope_dphi_left = 0.0;      ///< fitted rate of -phi' at -infinity
    double lambda = 0.0;
    double mu = 0.0;
    double max_relative_error = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
    double characteristic_residual_lambda = 0.0;
    double characteristic_residual_mu = 0.0;
    bool pass = false;
};

/// Fits exponential tails on [xi_max/2, 0.9 xi_max] and the mirrored window.
/// Slopes must agree with (lambda, mu) within `rel_tol`.
inline TailReport check_tail_estimates(const WaveProfile& p, double rel_tol = 0.02) {
    TailReport rep;
    rep.lambda = p.lambda;
    rep.mu = p.mu;
    const double c = p.c;
    rep.characteristic_residual_lambda =
        std::abs(p.lambda * p.lambda + c * p.lambda + p.nonlinearity.f_prime(0.0));
    rep.characteristic_residual_mu = std::abs(p.mu * p.mu + c * p.mu + p.nonlinearity.f_prime(1.0));

    auto fit_window = [&](double lo, double hi, auto&& value, const char* what) {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double x = p.xi[i];
            if (x < lo || x > hi) continue;
            const double v = value(i);
            if (!(v > 0.0) || !std::isfinite(v)) continue;
            xs.push_back(x);
            ys.push_back(std::log(v));
        }
        if (xs.size() < 20)
            throw Error(ErrorKind::FitWindowUnderResolved,
                        std::string("fewer than 20 usable points in the tail window for ") + what);
        return fit_line(xs, ys).slope;
    };

    const double rlo = 0.5 * p.grid.xi_max, rhi = 0.9 * p.grid.xi_max;
    const double llo = 0.9 * p.grid.xi_min, lhi = 0.5 * p.grid.xi_min;
    rep.slope_phi = fit_window(rlo, rhi, [&](std::size_t i) { return p.phi[i]; }, "phi");
    rep.slope_dphi_right = fit_window(rlo, rhi, [&](std::size_t i) { return -p.phi_prime[i]; }, "-phi'");
    rep.slope_one_minus_phi = fit_window(llo, lhi, [&](std::size_t i) { return 1.0 - p.phi[i]; }, "1 - phi");
    rep.slope_dphi_left = fit_window(llo, lhi, [&](std::size_t i) { return -p.phi_prime[i]; }, "-phi'");

    auto rel = [](double fitted, double target) { return std::abs(fitted - target) / std::abs(target); };
    rep.max_relative_error = std::max({rel(rep.slope_phi, p.lambda), rel(rep.slope_dphi_right, p.lambda),
                                       rel(rep.slope_one_minus_phi, p.mu), rel(rep.slope_dphi_left, p.mu)});

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    auto account = [&](double v) {
        if (!(v > 0.0) || !std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    };
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double x = p.xi[i];
        if (x >= 0.0 && x <= rhi) {
            const double e = std::exp(-p.lambda * x);
            account(p.phi[i] * e);
            account(-p.phi_prime[i] * e);
        }
        if (x <= 0.0 && x >= llo) {
            const double e = std::exp(-p.mu * x);
            account((1.0 - p.phi[i]) * e);
            account(-p.phi_prime[i] * e);
        }
    }
    rep.C1 = std::isfinite(lo) ? lo : 0.0;
    rep.C2 = hi;
    rep.pass = rep.max_relative_error <= rel_tol && rep.characteristic_residual_lambda <= 1e-10 &&
               rep.characteristic_residual_mu <= 1e-10;
    return rep;
}

/// True iff 0 < kappa < -lambda - c/2.
inline bool check_rate_constraint(double kappa, const WaveProfile& p) {
    return kappa > 0.0 && kappa < -p.lambda - 0.5 * p.c;
}

inline double rate_constraint_bound(const WaveProfile& p) { return -p.lambda - 0.5 * p.c; }

/// Evaluates phi and phi' anywhere: cubic Hermite inside the grid and the
/// linearized exponential tails outside it.
class WaveInterpolant {
public:
    WaveInterpolant() = default;
    explicit WaveInterpolant(const WaveProfile& p)
        : xi_min_(p.grid.xi_min), xi_max_(p.grid.xi_max), h_(p.grid.h()), lambda_(p.lambda), mu_(p.mu),
          phi_(p.phi), dphi_(p.phi_prime) {}

    double value(double xi) const { return sample(xi).value; }
    double slope(double xi) const { return sample(xi).slope; }

    HermiteSample sample(double xi) const {
        const std::size_t n = phi_.size();
        if (xi >= xi_max_) {
            const double v = phi_[n - 1] * std::exp(lambda_ * (xi - xi_max_));
            return {v, lambda_ * v};
        }
        if (xi <= xi_min_) {
            const double g = (1.0 - phi_[0]) * std::exp(mu_ * (xi - xi_min_));
            return {1.0 - g, -mu_ * g};
        }
        const double s = (xi - xi_min_) / h_;
        std::size_t i = std::min(static_cast<std::size_t>(s), n - 2);
        const double t = s - double(i);
        return hermite_cubic(phi_[i], phi_[i + 1], dphi_[i], dphi_[i + 1], h_, t);
    }

private:
    double xi_min_ = 0, xi_max_ = 0, h_ = 1, lambda_ = 0, mu_ = 0;
    std::vector<double> phi_, dphi_;
};

}  // namespace frontlab
