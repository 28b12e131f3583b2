#pragma once

#include "frontlab/core/banded.hpp"
#include "frontlab/core/error.hpp"
#include "frontlab/sim1d/heterogeneity.hpp"
#include "frontlab/sim1d/tracking.hpp"
#include "frontlab/spectral.hpp"
#include "frontlab/wave.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace frontlab {

enum class Scheme { IMEX_CN, FullyImplicit };
enum class LeftBC { Dirichlet, Neumann };   ///< Dirichlet pins u = 1
enum class RightBC { Robin, Neumann };      ///< Robin: u' = lambda u

enum class InitialKind { Wave, Constant };

struct InitialDatum {
    InitialKind kind = InitialKind::Wave;
    double value = 0.0;  ///< Constant only
    double shift = 0.0;  ///< Wave only: datum phi(x - c t_start + shift)
};

struct Sim1DConfig {
    double x_min = -60.0;
    double x_max = 60.0;
    double h = 0.05;
    double dt = 0.01;
    double t_start = 0.0;  ///< the wave datum is phi(x - c t_start)
    double t_end = 50.0;
    Scheme scheme = Scheme::IMEX_CN;
    std::shared_ptr<const WaveProfile> profile;
    Heterogeneity1D het = Heterogeneity1D::none();
    LeftBC left = LeftBC::Dirichlet;
    RightBC right = RightBC::Robin;
    InitialDatum initial;
    double snapshot_every = 1.0;
    double eps1 = 0.1;
    bool track = true;
    bool keep_fields = false;
    bool check_domain = true;  ///< require x_max - c t_end >= 10
    /// Runs the integrator at dt and dt/2 and reports (4 u_{dt/2} - u_dt)/3 at
    /// the snapshots, which removes the leading O(dt^2) time error.
    bool richardson = false;

    std::size_t n_nodes() const { return static_cast<std::size_t>(std::lround((x_max - x_min) / h)) + 1; }
    double node(std::size_t i) const { return x_min + double(i) * h; }
};

struct Snapshot1D {
    double t = 0.0;
    double chi = std::numeric_limits<double>::quiet_NaN();
    double sup_err = 0.0;
    double w_l2 = std::numeric_limits<double>::quiet_NaN();
    double front_pos = std::numeric_limits<double>::quiet_NaN();
    double u_min = 0.0;
    double u_max = 0.0;
    bool tracked = false;
    std::vector<double> u;  ///< kept when keep_fields is set
    std::vector<double> v;  ///< range part on the wave grid, kept with keep_fields
};

struct RunTrajectory {
    std::vector<double> x;
    double c = 0.0;
    std::vector<Snapshot1D> snapshots;
    std::vector<double> u_final;
    bool tracking_lost = false;
    double tracking_lost_at = std::numeric_limits<double>::quiet_NaN();
    long steps = 0;
};

/// Second-derivative operator on n uniform nodes: five-point fourth-order
/// stencil in the interior, three-point next to the ends, boundary rows from
/// the closures (ghost node for Neumann/Robin, zero row for Dirichlet).
inline BandMatrix second_derivative_matrix(std::size_t n, double h, LeftBC left, RightBC right, double lambda) {
    if (n < 6) throw Error(ErrorKind::ValidationError, "grid needs at least 6 nodes");
    BandMatrix d(n, 2, 2);
    const double a = 1.0 / (h * h);
    if (left == LeftBC::Neumann) {
        d(0, 0) = -2.0 * a;
        d(0, 1) = 2.0 * a;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (i >= 2 && i + 2 < n) {
            d(i, i - 2) = -a / 12.0;
            d(i, i - 1) = 16.0 * a / 12.0;
            d(i, i) = -30.0 * a / 12.0;
            d(i, i + 1) = 16.0 * a / 12.0;
            d(i, i + 2) = -a / 12.0;
        } else {
            d(i, i - 1) = a;
            d(i, i) = -2.0 * a;
            d(i, i + 1) = a;
        }
    }
    const double rate = right == RightBC::Robin ? lambda : 0.0;
    d(n - 1, n - 2) = 2.0 * a;
    d(n - 1, n - 1) = (-2.0 + 2.0 * h * rate) * a;
    return d;
}

/// Rightmost station where u crosses `level` downwards, linearly interpolated.
inline double front_position(const std::vector<double>& x, std::span<const double> u, double level = 0.5) {
    for (std::size_t i = u.size() - 1; i-- > 0;) {
        if (u[i] >= level && u[i + 1] < level) {
            const double t = (u[i] - level) / (u[i] - u[i + 1]);
            return x[i] + t * (x[i + 1] - x[i]);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

inline void validate(const Sim1DConfig& cfg) {
    if (!cfg.profile) throw Error(ErrorKind::ValidationError, "no wave profile", "sim1d");
    if (!(cfg.h > 0.0)) throw Error(ErrorKind::ValidationError, "h must be positive", "sim1d.h");
    if (!(cfg.dt > 0.0)) throw Error(ErrorKind::ValidationError, "dt must be positive", "sim1d.dt");
    if (!(cfg.x_max > cfg.x_min)) throw Error(ErrorKind::ValidationError, "x_max must exceed x_min", "sim1d.x_max");
    if (!(cfg.t_end > cfg.t_start)) throw Error(ErrorKind::ValidationError, "t_end must exceed t_start", "sim1d.t_end");
    if (!(cfg.snapshot_every > 0.0))
        throw Error(ErrorKind::ValidationError, "snapshot cadence must be positive", "outputs.cadence");
    const double steps = (cfg.t_end - cfg.t_start) / cfg.dt;
    if (std::abs(steps - std::round(steps)) > 1e-6)
        throw Error(ErrorKind::ValidationError, "dt must divide the run length", "sim1d.dt");
    const double span = (cfg.x_max - cfg.x_min) / cfg.h;
    if (std::abs(span - std::round(span)) > 1e-6)
        throw Error(ErrorKind::ValidationError, "h must divide the domain length", "sim1d.h");
    const double fmax = sup_norm_f_prime(cfg.profile->nonlinearity);
    const double limit = std::min(0.5 / (fmax * (1.0 + cfg.het.sup_abs())), cfg.h);
    if (cfg.scheme == Scheme::IMEX_CN && cfg.dt > limit * (1.0 + 1e-12))
        throw Error(ErrorKind::CFLViolation,
                    "dt = " + std::to_string(cfg.dt) + " exceeds the reaction bound " + std::to_string(limit),
                    "sim1d.dt");
    if (cfg.check_domain && cfg.initial.kind == InitialKind::Wave &&
        cfg.x_max - (cfg.profile->c * cfg.t_end - cfg.initial.shift) < 10.0)
        throw Error(ErrorKind::ValidationError, "front reaches the right buffer: need x_max - c t_end >= 10",
                    "sim1d.x_max");
}

namespace detail {

/// Time loop shared by the plain and extrapolated runs; calls
/// on_snapshot(t, u) at every multiple of the cadence and at t_end.
template <class OnSnapshot>
long integrate_1d(const Sim1DConfig& cfg, double dt, OnSnapshot&& on_snapshot) {
    const auto& prof = *cfg.profile;
    const auto& nl = prof.nonlinearity;
    const std::size_t n = cfg.n_nodes();
    const double h = cfg.h, c = prof.c;
    const WaveInterpolant wave(prof);

    std::vector<double> rate(n);
    for (std::size_t i = 0; i < n; ++i) rate[i] = cfg.het.r(cfg.node(i));

    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i)
        u[i] = cfg.initial.kind == InitialKind::Wave ? wave.value(cfg.node(i) - c * cfg.t_start + cfg.initial.shift)
                                                      : cfg.initial.value;
    if (cfg.left == LeftBC::Dirichlet) u[0] = 1.0;

    const BandMatrix D = second_derivative_matrix(n, h, cfg.left, cfg.right, prof.lambda);
    auto implicit_matrix = [&](const std::vector<double>* jac) {
        BandMatrix m = D;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = (i >= 2 ? i - 2 : 0); j <= std::min(n - 1, i + 2); ++j) {
                m(i, j) = -0.5 * dt * D(i, j) + (i == j ? 1.0 : 0.0);
                if (jac && i == j) m(i, j) -= 0.5 * dt * (*jac)[i];
            }
        if (cfg.left == LeftBC::Dirichlet) {
            for (std::size_t j = 0; j <= 2; ++j) m(0, j) = j == 0 ? 1.0 : 0.0;
        }
        return m;
    };
    const BandLU lhs_lu(implicit_matrix(nullptr));

    auto reaction = [&](const std::vector<double>& s, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) out[i] = nl.f(s[i]) * (1.0 + rate[i]);
        if (cfg.left == LeftBC::Dirichlet) out[0] = 0.0;
    };

    const long steps = std::lround((cfg.t_end - cfg.t_start) / dt);
    auto is_snapshot = [&](double t) {
        const double k = t / cfg.snapshot_every;
        return std::abs(k - std::round(k)) * cfg.snapshot_every < 0.25 * cfg.dt;
    };
    if (is_snapshot(cfg.t_start)) on_snapshot(cfg.t_start, u);

    std::vector<double> F(n), F_old(n), rhs(n), Du(n);
    reaction(u, F);
    F_old = F;
    for (long step = 1; step <= steps; ++step) {
        D.multiply(u, Du);
        if (cfg.scheme == Scheme::IMEX_CN) {
            for (std::size_t i = 0; i < n; ++i) rhs[i] = u[i] + 0.5 * dt * Du[i] + dt * (1.5 * F[i] - 0.5 * F_old[i]);
            if (cfg.left == LeftBC::Dirichlet) rhs[0] = 1.0;
            lhs_lu.solve_in_place(rhs);
            u.swap(rhs);
        } else {
            // Crank-Nicolson with the reaction inside, solved by Newton.
            std::vector<double> base(n), next(u), Fn(n), jac(n), res(n), Dn(n);
            for (std::size_t i = 0; i < n; ++i) base[i] = u[i] + 0.5 * dt * (Du[i] + F[i]);
            for (int it = 0; it < 30; ++it) {
                reaction(next, Fn);
                D.multiply(next, Dn);
                double norm = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    res[i] = next[i] - 0.5 * dt * (Dn[i] + Fn[i]) - base[i];
                    jac[i] = nl.f_prime(next[i]) * (1.0 + rate[i]);
                }
                if (cfg.left == LeftBC::Dirichlet) {
                    res[0] = next[0] - 1.0;
                    jac[0] = 0.0;
                }
                for (double r : res) norm = std::max(norm, std::abs(r));
                if (norm <= 1e-13) break;
                if (it == 29) throw Error(ErrorKind::NoConvergence, "implicit step did not converge");
                BandLU(implicit_matrix(&jac)).solve_in_place(res);
                for (std::size_t i = 0; i < n; ++i) next[i] -= res[i];
            }
            u.swap(next);
        }
        F_old.swap(F);
        reaction(u, F);

        double umax = 0.0;
        for (double v : u) {
            if (!std::isfinite(v)) throw Error(ErrorKind::BlowUp, "non-finite state at step " + std::to_string(step));
            umax = std::max(umax, std::abs(v));
        }
        if (umax > 2.0)
            throw Error(ErrorKind::BlowUp, "|u| exceeded 2 at t = " + std::to_string(cfg.t_start + step * dt));

        const double t = cfg.t_start + double(step) * dt;
        if (is_snapshot(t) || step == steps) on_snapshot(t, u);
    }
    return steps;
}

}  // namespace detail

/// Integrates u_t = u_xx + f(u)(1 + r(x)) on [x_min, x_max].
inline RunTrajectory run_cauchy_1d(const Sim1DConfig& cfg, const ProjectionContext* ctx = nullptr) {
    validate(cfg);
    const auto& prof = *cfg.profile;
    const std::size_t n = cfg.n_nodes();
    const double c = prof.c;
    const WaveInterpolant wave(prof);

    RunTrajectory traj;
    traj.c = c;
    traj.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) traj.x[i] = cfg.node(i);
    const auto& x = traj.x;

    const double shift = cfg.initial.kind == InitialKind::Wave ? cfg.initial.shift : 0.0;
    double chi_prev = 0.0;
    auto snapshot = [&](double t, const std::vector<double>& u) {
        Snapshot1D s;
        s.t = t;
        s.u_min = *std::min_element(u.begin(), u.end());
        s.u_max = *std::max_element(u.begin(), u.end());
        for (std::size_t i = 0; i < n; ++i)
            s.sup_err = std::max(s.sup_err, std::abs(u[i] - wave.value(x[i] - c * t + shift)));
        s.front_pos = front_position(x, u);
        if (cfg.track && ctx) {
            try {
                const UniformField field{cfg.x_min, cfg.h, u};
                auto tr = track_front(field, *ctx, wave, t, chi_prev, shift, cfg.eps1);
                s.chi = tr.chi;
                s.w_l2 = w_energy(*ctx, tr.v);
                s.tracked = true;
                chi_prev = tr.chi;
                if (cfg.keep_fields) s.v = std::move(tr.v);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::TrackingLost) throw;
                if (!traj.tracking_lost) {
                    traj.tracking_lost = true;
                    traj.tracking_lost_at = t;
                }
            }
        }
        if (cfg.keep_fields) s.u = u;
        traj.snapshots.push_back(std::move(s));
        traj.u_final = u;
    };

    if (!cfg.richardson) {
        traj.steps = detail::integrate_1d(cfg, cfg.dt, snapshot);
        return traj;
    }
    std::vector<std::vector<double>> coarse;
    traj.steps = detail::integrate_1d(cfg, cfg.dt, [&](double, const std::vector<double>& u) { coarse.push_back(u); });
    std::size_t k = 0;
    std::vector<double> mix(n);
    traj.steps += detail::integrate_1d(cfg, 0.5 * cfg.dt, [&](double t, const std::vector<double>& u) {
        if (k >= coarse.size()) throw Error(ErrorKind::ShapeMismatch, "snapshot schedules of the two runs differ");
        for (std::size_t i = 0; i < n; ++i) mix[i] = (4.0 * u[i] - coarse[k][i]) / 3.0;
        ++k;
        snapshot(t, mix);
    });
    return traj;
}

}  // namespace frontlab
