#pragma once

#include "frontlab/core/banded.hpp"
#include "frontlab/core/error.hpp"
#include "frontlab/sim1d/stepper.hpp"
#include "frontlab/sim1d/tracking.hpp"
#include "frontlab/sim2d/domain.hpp"
#include "frontlab/sim2d/mapped.hpp"
#include "frontlab/spectral.hpp"
#include "frontlab/wave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace frontlab {

struct Sim2DConfig {
    DomainSpec2D domain;
    double x_min = -60.0;
    double x_max = 40.0;
    double hx = 0.05;
    std::size_t nz_cells = 16;
    double dt = 0.01;
    double t_start = 0.0;
    double t_end = 50.0;
    double M = 0.0;  ///< datum phi(x - c t_start + M)
    std::shared_ptr<const WaveProfile> profile;
    LeftBC left = LeftBC::Dirichlet;
    RightBC right = RightBC::Robin;
    InitialDatum initial;
    double snapshot_every = 1.0;
    double eps1 = 0.1;
    bool track = true;
    bool keep_fields = false;
    bool check_domain = true;  ///< require x_max - (c t_end - M) >= 10
};

struct Snapshot2D {
    double t = 0.0;
    double mean_front = std::numeric_limits<double>::quiet_NaN();
    double chi_min = std::numeric_limits<double>::quiet_NaN();
    double chi_max = std::numeric_limits<double>::quiet_NaN();
    double sup_err = 0.0;
    double R1_sup = 0.0;
    double R2_sup = 0.0;
    double u_min = 0.0, u_max = 0.0;
    bool tracked = false;
    // Per cross-section z_j.
    std::vector<double> chi, section_sup_err, section_front, section_w_l2;
    std::vector<double> u;  ///< full field, with keep_fields
};

struct RunTrajectory2D {
    MappedGrid grid;
    double c = 0.0;
    std::vector<Snapshot2D> snapshots;
    std::vector<double> u_final;
    bool tracking_lost = false;
    double tracking_lost_at = std::numeric_limits<double>::quiet_NaN();
    long steps = 0;
};

struct Track2D {
    std::vector<double> chi;             ///< phase per cross-section
    std::vector<std::vector<double>> v;  ///< range part per cross-section, on the wave grid
    double mean_front = 0.0;             ///< cross-section mean of the u = 1/2 station
};

/// Applies the 1D tracker to every cross-section z_j of a mapped field.
inline Track2D track_front_2d(const MappedGrid& g, std::span<const double> u, double t, const ProjectionContext& ctx,
                              const WaveInterpolant& wave, double M, const std::vector<double>& chi_prev,
                              double eps1 = 0.1) {
    if (u.size() != g.size()) throw Error(ErrorKind::ShapeMismatch, "field does not match the mapped grid");
    Track2D out;
    out.chi.resize(g.nz);
    out.v.resize(g.nz);
    std::vector<double> x(g.nx), row(g.nx);
    for (std::size_t i = 0; i < g.nx; ++i) x[i] = g.x(i);
    for (std::size_t j = 0; j < g.nz; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) row[i] = u[g.idx(i, j)];
        const UniformField field{g.x_min, g.hx, row};
        const double prev = chi_prev.size() == g.nz ? chi_prev[j] : 0.0;
        try {
            auto tr = track_front(field, ctx, wave, t, prev, M, eps1);
            out.chi[j] = tr.chi;
            out.v[j] = std::move(tr.v);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::TrackingLost) throw;
            throw Error(ErrorKind::TrackingLost, "section z-index " + std::to_string(j) + ": " + e.detail());
        }
        out.mean_front += front_position(x, row) / double(g.nz);
    }
    return out;
}

inline void validate(const Sim2DConfig& cfg) {
    if (!cfg.profile) throw Error(ErrorKind::ValidationError, "no wave profile", "sim2d");
    if (!(cfg.dt > 0.0)) throw Error(ErrorKind::ValidationError, "dt must be positive", "sim2d.dt");
    if (!(cfg.t_end > cfg.t_start)) throw Error(ErrorKind::ValidationError, "t_end must exceed t_start", "sim2d.t_end");
    if (!(cfg.snapshot_every > 0.0))
        throw Error(ErrorKind::ValidationError, "snapshot cadence must be positive", "outputs.cadence");
    const double steps = (cfg.t_end - cfg.t_start) / cfg.dt;
    if (std::abs(steps - std::round(steps)) > 1e-6)
        throw Error(ErrorKind::ValidationError, "dt must divide the run length", "sim2d.dt");
    const double hz = (cfg.domain.omega_hi - cfg.domain.omega_lo) / double(cfg.nz_cells);
    const double fmax = sup_norm_f_prime(cfg.profile->nonlinearity);
    const double limit = std::min({0.5 / fmax, cfg.hx, hz});
    if (cfg.dt > limit * (1.0 + 1e-12))
        throw Error(ErrorKind::CFLViolation,
                    "dt = " + std::to_string(cfg.dt) + " exceeds the explicit-term bound " + std::to_string(limit),
                    "sim2d.dt");
    if (cfg.check_domain && cfg.initial.kind == InitialKind::Wave &&
        cfg.x_max - (cfg.profile->c * cfg.t_end - cfg.M) < 10.0)
        throw Error(ErrorKind::ValidationError, "front reaches the right buffer: need x_max - (c t - M) >= 10",
                    "sim2d.x_max");
}

namespace detail {

/// Tridiagonal factorization reused for every step.
struct TridiagFactor {
    std::vector<double> sub, inv, sup;  // sup is the eliminated upper coefficient

    void factor(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c) {
        const std::size_t n = b.size();
        sub = a;
        inv.resize(n);
        sup.resize(n);
        double prev_sup = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = b[j] - (j > 0 ? a[j] * prev_sup : 0.0);
            if (d == 0.0) throw Error(ErrorKind::NoConvergence, "zero pivot in the section solve");
            inv[j] = 1.0 / d;
            sup[j] = c[j] * inv[j];
            prev_sup = sup[j];
        }
    }
    void solve(double* x) const {
        const std::size_t n = inv.size();
        x[0] *= inv[0];
        for (std::size_t j = 1; j < n; ++j) x[j] = (x[j] - sub[j] * x[j - 1]) * inv[j];
        for (std::size_t j = n - 1; j-- > 0;) x[j] -= sup[j] * x[j + 1];
    }
};

}  // namespace detail

/// Integrates the mapped equation u_t = [mapped Laplacian] u + f(u) by a
/// Douglas splitting: the x-part (with the wall closure terms) and the
/// (d_zz, d_z) part implicit, the interior mixed term explicit, reaction by AB2.
inline RunTrajectory2D run_cauchy_2d(const Sim2DConfig& cfg, const ProjectionContext* ctx = nullptr) {
    validate(cfg);
    const auto& prof = *cfg.profile;
    const auto& nl = prof.nonlinearity;
    const double dt = cfg.dt, c = prof.c;
    const WaveInterpolant wave(prof);

    RunTrajectory2D traj;
    traj.c = c;
    traj.grid = build_grid(cfg.domain, cfg.x_min, cfg.x_max, cfg.hx, cfg.nz_cells);
    const MappedGrid& g = traj.grid;
    const std::size_t nx = g.nx, nz = g.nz, N = g.size();
    const double hx = g.hx, hz = g.hz;

    std::vector<double> u(N);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nz; ++j)
            u[g.idx(i, j)] = cfg.initial.kind == InitialKind::Wave ? wave.value(g.x(i) - c * cfg.t_start + cfg.M)
                                                                    : cfg.initial.value;
    const bool pinned = cfg.left == LeftBC::Dirichlet;
    const std::size_t i0 = pinned ? 1 : 0;  // first unknown column
    if (pinned)
        for (std::size_t j = 0; j < nz; ++j) u[g.idx(0, j)] = 1.0;

    // x-direction: the 1D operator with the end conditions of the config. On the two walls the oblique closure u_z = beta u_x turns the
    // mixed term and the ghost-node data into x-derivatives along the wall;
    // they join the implicit x-operator of those rows.
    const BandMatrix D = second_derivative_matrix(nx, hx, cfg.left, cfg.right, prof.lambda);
    auto wall_operator = [&](Wall wall) {
        const std::size_t j = wall == Wall::Lower ? 0 : nz - 1;
        BandMatrix B = D;
        // g_k = beta_k (d_x u)_k as a row of weights.
        auto add_g = [&](std::size_t row, std::size_t k, double weight) {
            if (k == 0) return;
            const double beta = neumann_uz(g, k, wall, 1.0);
            if (k == nx - 1) {
                B(row, k) += weight * beta / hx;
                B(row, k - 1) -= weight * beta / hx;
            } else {
                B(row, k + 1) += weight * beta / (2 * hx);
                B(row, k - 1) -= weight * beta / (2 * hx);
            }
        };
        // A mirrored left end makes g odd about x_min.
        if (!pinned) add_g(0, 1, coefficients(g, 0, j).a_xz / hx);
        for (std::size_t i = 1; i < nx; ++i) {
            const auto co = coefficients(g, i, j);
            const double q = co.a_zz * (wall == Wall::Lower ? -2.0 : 2.0) / hz + co.a_z;
            add_g(i, i, q);
            if (i == nx - 1) {
                add_g(i, i, co.a_xz / hx);
                add_g(i, i - 1, -co.a_xz / hx);
            } else {
                add_g(i, i + 1, co.a_xz / (2 * hx));
                add_g(i, i - 1, -co.a_xz / (2 * hx));
            }
        }
        return B;
    };
    const BandMatrix B_lo = wall_operator(Wall::Lower);
    const BandMatrix B_hi = wall_operator(Wall::Upper);
    auto x_factor = [&](const BandMatrix& A) {
        BandMatrix m = A;
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t k = (i >= 2 ? i - 2 : 0); k <= std::min(nx - 1, i + 2); ++k)
                m(i, k) = -0.5 * dt * A(i, k) + (i == k ? 1.0 : 0.0);
        if (pinned)
            for (std::size_t k = 0; k <= 2; ++k) m(0, k) = k == 0 ? 1.0 : 0.0;
        return BandLU(m);
    };
    const BandLU x_lu = x_factor(D);
    const BandLU x_lu_lo = x_factor(B_lo);
    const BandLU x_lu_hi = x_factor(B_hi);
    auto row_operator = [&](std::size_t j) -> const BandMatrix& {
        return j == 0 ? B_lo : (j == nz - 1 ? B_hi : D);
    };
    auto row_factor = [&](std::size_t j) -> const BandLU& {
        return j == 0 ? x_lu_lo : (j == nz - 1 ? x_lu_hi : x_lu);
    };

    // z-direction: a_zz d_zz + a_z d_z with homogeneous ghost closures.
    std::vector<double> zl(N), zd(N), zu(N);
    std::vector<detail::TridiagFactor> z_lu(nx);
    for (std::size_t i = i0; i < nx; ++i) {
        std::vector<double> a(nz), b(nz), cc(nz);
        for (std::size_t j = 0; j < nz; ++j) {
            const auto co = coefficients(g, i, j);
            const std::size_t k = g.idx(i, j);
            if (j == 0) {
                zl[k] = 0.0;
                zd[k] = -2.0 * co.a_zz / (hz * hz);
                zu[k] = 2.0 * co.a_zz / (hz * hz);
            } else if (j == nz - 1) {
                zl[k] = 2.0 * co.a_zz / (hz * hz);
                zd[k] = -2.0 * co.a_zz / (hz * hz);
                zu[k] = 0.0;
            } else {
                zl[k] = co.a_zz / (hz * hz) - co.a_z / (2 * hz);
                zd[k] = -2.0 * co.a_zz / (hz * hz);
                zu[k] = co.a_zz / (hz * hz) + co.a_z / (2 * hz);
            }
            a[j] = -0.5 * dt * zl[k];
            b[j] = 1.0 - 0.5 * dt * zd[k];
            cc[j] = -0.5 * dt * zu[k];
        }
        z_lu[i].factor(a, b, cc);
    }

    auto apply_x = [&](const std::vector<double>& s, std::vector<double>& out) {
        std::vector<double> row(nx), res(nx);
        for (std::size_t j = 0; j < nz; ++j) {
            for (std::size_t i = 0; i < nx; ++i) row[i] = s[g.idx(i, j)];
            row_operator(j).multiply(row, res);
            for (std::size_t i = 0; i < nx; ++i) out[g.idx(i, j)] = res[i];
        }
        if (pinned)
            for (std::size_t j = 0; j < nz; ++j) out[g.idx(0, j)] = 0.0;
    };
    auto apply_z = [&](const std::vector<double>& s, std::vector<double>& out) {
        for (std::size_t j = 0; j < nz; ++j) out[g.idx(0, j)] = 0.0;
        for (std::size_t i = i0; i < nx; ++i)
            for (std::size_t j = 0; j < nz; ++j) {
                const std::size_t k = g.idx(i, j);
                double v = zd[k] * s[k];
                if (j > 0) v += zl[k] * s[k - 1];
                if (j + 1 < nz) v += zu[k] * s[k + 1];
                out[k] = v;
            }
    };
    // Mixed term away from the walls.
    auto apply_explicit = [&](const std::vector<double>& s, std::vector<double>& out) {
        auto S = [&](std::size_t a, std::size_t b) { return s[g.idx(a, b)]; };
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 1; i < nx; ++i)
            for (std::size_t j = 1; j + 1 < nz; ++j) {
                const auto co = coefficients(g, i, j);
                double uxz;
                if (i == nx - 1)
                    uxz = (S(i, j + 1) - S(i, j - 1) - S(i - 1, j + 1) + S(i - 1, j - 1)) / (2 * hx * hz);
                else
                    uxz = (S(i + 1, j + 1) - S(i + 1, j - 1) - S(i - 1, j + 1) + S(i - 1, j - 1)) / (4 * hx * hz);
                out[g.idx(i, j)] = co.a_xz * uxz;
            }
    };
    auto reaction = [&](const std::vector<double>& s, std::vector<double>& out) {
        for (std::size_t k = 0; k < N; ++k) out[k] = nl.f(s[k]);
        if (pinned)
            for (std::size_t j = 0; j < nz; ++j) out[g.idx(0, j)] = 0.0;
    };

    std::vector<double> x_nodes(nx);
    for (std::size_t i = 0; i < nx; ++i) x_nodes[i] = g.x(i);
    std::vector<double> chi_prev(nz, 0.0);
    auto snapshot = [&](double t) {
        Snapshot2D s;
        s.t = t;
        s.u_min = *std::min_element(u.begin(), u.end());
        s.u_max = *std::max_element(u.begin(), u.end());
        s.section_sup_err.assign(nz, 0.0);
        s.section_front.resize(nz);
        std::vector<double> row(nx);
        for (std::size_t j = 0; j < nz; ++j) {
            for (std::size_t i = 0; i < nx; ++i) {
                row[i] = u[g.idx(i, j)];
                s.section_sup_err[j] =
                    std::max(s.section_sup_err[j], std::abs(row[i] - wave.value(g.x(i) - c * t + cfg.M)));
            }
            s.section_front[j] = front_position(x_nodes, row);
            s.sup_err = std::max(s.sup_err, s.section_sup_err[j]);
        }
        double acc = 0.0;
        for (double f : s.section_front) acc += f;
        s.mean_front = acc / double(nz);
        const auto res = residual_diagnostics(g, u);
        s.R1_sup = res.R1_sup;
        s.R2_sup = res.R2_sup;
        if (cfg.track && ctx) {
            try {
                auto tr = track_front_2d(g, u, t, *ctx, wave, cfg.M, chi_prev, cfg.eps1);
                s.chi = tr.chi;
                s.section_w_l2.resize(nz);
                for (std::size_t j = 0; j < nz; ++j) s.section_w_l2[j] = w_energy(*ctx, tr.v[j]);
                s.chi_min = *std::min_element(s.chi.begin(), s.chi.end());
                s.chi_max = *std::max_element(s.chi.begin(), s.chi.end());
                s.tracked = true;
                chi_prev = tr.chi;
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
    };

    const long steps = std::lround((cfg.t_end - cfg.t_start) / dt);
    auto is_snapshot = [&](double t) {
        const double k = t / cfg.snapshot_every;
        return std::abs(k - std::round(k)) * cfg.snapshot_every < 0.25 * dt;
    };
    if (is_snapshot(cfg.t_start)) snapshot(cfg.t_start);

    std::vector<double> F(N), F_old(N), Ax(N), Az(N), E(N), Y(N), row(nx);
    reaction(u, F);
    F_old = F;
    for (long step = 1; step <= steps; ++step) {
        apply_x(u, Ax);
        apply_z(u, Az);
        apply_explicit(u, E);
        // Predictor, then the x-correction solved row by row.
        for (std::size_t k = 0; k < N; ++k)
            Y[k] = u[k] + dt * (Ax[k] + Az[k] + E[k] + 1.5 * F[k] - 0.5 * F_old[k]) - 0.5 * dt * Ax[k];
        for (std::size_t j = 0; j < nz; ++j) {
            for (std::size_t i = 0; i < nx; ++i) row[i] = Y[g.idx(i, j)];
            if (pinned) row[0] = 1.0;
            row_factor(j).solve_in_place(row);
            for (std::size_t i = 0; i < nx; ++i) Y[g.idx(i, j)] = row[i];
        }
        // z-correction, column by column.
        for (std::size_t k = 0; k < N; ++k) Y[k] -= 0.5 * dt * Az[k];
        for (std::size_t i = i0; i < nx; ++i) z_lu[i].solve(&Y[g.idx(i, 0)]);
        u.swap(Y);
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
        if (is_snapshot(t) || step == steps) snapshot(t);
    }
    traj.steps = steps;
    traj.u_final = u;
    return traj;
}

}  // namespace frontlab
