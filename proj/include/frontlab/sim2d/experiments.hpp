#pragma once

#include "frontlab/core/parallel.hpp"
#include "frontlab/sim1d/experiments.hpp"
#include "frontlab/sim2d/stepper.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace frontlab {

/// Mirrors the 1D construction: u_n starts at t = -n from phi(x + c n) and
/// consecutive runs are compared on [-T0, T0] x [x_lo, x_hi] x (all z).
inline EntireSequenceReport entire_solution_sequence_2d(const Sim2DConfig& base, const std::vector<int>& n_list,
                                                        const EntireWindow& window = {}) {
    detail::check_increasing(n_list);
    struct Sampled {
        std::vector<double> t;
        std::vector<std::vector<double>> u;
    };
    std::vector<Sampled> runs(n_list.size());
    parallel_for(n_list.size(), [&](std::size_t k) {
        Sim2DConfig cfg = base;
        cfg.t_start = -double(n_list[k]);
        cfg.t_end = window.T0;
        cfg.M = 0.0;
        cfg.snapshot_every = window.sample_every;
        cfg.keep_fields = true;
        cfg.track = false;
        cfg.initial.kind = InitialKind::Wave;
        const auto traj = run_cauchy_2d(cfg);
        const auto& g = traj.grid;
        for (const auto& s : traj.snapshots) {
            if (s.t < -window.T0 - 1e-9) continue;
            std::vector<double> vals;
            for (std::size_t i = 0; i < g.nx; ++i)
                if (g.x(i) >= window.x_lo - 1e-12 && g.x(i) <= window.x_hi + 1e-12)
                    for (std::size_t j = 0; j < g.nz; ++j) vals.push_back(s.u[g.idx(i, j)]);
            runs[k].t.push_back(s.t);
            runs[k].u.push_back(std::move(vals));
        }
    });
    EntireSequenceReport rep;
    rep.n = n_list;
    for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
        const auto& a = runs[k];
        const auto& b = runs[k + 1];
        if (a.t.size() != b.t.size())
            throw Error(ErrorKind::ShapeMismatch, "runs sampled the window at different times");
        double d = 0.0;
        for (std::size_t s = 0; s < a.t.size(); ++s)
            for (std::size_t i = 0; i < a.u[s].size(); ++i) d = std::max(d, std::abs(a.u[s][i] - b.u[s][i]));
        rep.d.push_back(d);
    }
    rep.n.resize(rep.d.size());
    detail::finish_sequence(rep);
    return rep;
}

/// Channel of unit width (limit section [0, 1]) that widens symmetrically to
/// `ratio` times its width over a transition of length L centred at x0.
struct WideningFamily {
    double ratio = 8.0;
    double x0 = 0.0;
    double kappa = 0.25;
    double margin = 10.0;          ///< propagation: mean front beyond x0 + L/2 + margin
    double station_offset = 5.0;   ///< blocking: max_z u < theta at x0 + L/2 + offset at t_end

    /// Sigmoid rate 4/L: the widening covers about 96% of its amplitude over [x0 - L/2, x0 + L/2].
    DomainSpec2D member(double L, double x_lo, double x_hi) const {
        const double amp = 0.5 * (ratio - 1.0);
        const double rate = 4.0 / L;
        DomainParams p;
        p.b_minus = BoundaryGraph::sigmoid(0.0, -amp, rate, x0);
        p.b_plus = BoundaryGraph::sigmoid(1.0, amp, rate, x0);
        p.kappa = std::min(kappa, rate);
        p.x_lo = x_lo;
        p.x_hi = x_hi;
        p.width_min = 0.5;
        p.r_ball = 0.99 * admissible_ball_radius(p.b_minus, p.b_plus, x_lo, x_hi);
        return build_domain(p);
    }
};

struct BlockingRun {
    double parameter = 0.0;
    Outcome outcome = Outcome::Undecided;
    double max_front = std::numeric_limits<double>::quiet_NaN();
    double final_front = std::numeric_limits<double>::quiet_NaN();
    double u_station = std::numeric_limits<double>::quiet_NaN();
};

struct BlockingReport {
    std::vector<BlockingRun> runs;
    bool single_transition = false;
    double transition = std::numeric_limits<double>::quiet_NaN();
};

/// Runs every transition length in `lengths` (ordered from gentle to abrupt)
/// and classifies each from the mean front and the terminal field beyond the
/// widening.
inline BlockingReport blocking_exploration(const Sim2DConfig& base, const WideningFamily& family,
                                           const std::vector<double>& lengths) {
    BlockingReport rep;
    rep.runs.resize(lengths.size());
    const double theta = base.profile->theta();
    parallel_for(lengths.size(), [&](std::size_t k) {
        const double L = lengths[k];
        Sim2DConfig cfg = base;
        cfg.domain = family.member(L, cfg.x_min, cfg.x_max);
        cfg.track = false;
        cfg.keep_fields = false;
        const auto traj = run_cauchy_2d(cfg);
        const auto& g = traj.grid;
        BlockingRun& run = rep.runs[k];
        run.parameter = L;
        run.max_front = -std::numeric_limits<double>::infinity();
        for (const auto& s : traj.snapshots)
            if (std::isfinite(s.mean_front)) run.max_front = std::max(run.max_front, s.mean_front);
        run.final_front = traj.snapshots.back().mean_front;
        const double exit = family.x0 + 0.5 * L;
        const double station = exit + family.station_offset;
        const std::size_t i = static_cast<std::size_t>(std::lround((station - g.x_min) / g.hx));
        run.u_station = 0.0;
        for (std::size_t j = 0; j < g.nz; ++j) run.u_station = std::max(run.u_station, traj.u_final[g.idx(i, j)]);
        if (run.max_front > exit + family.margin)
            run.outcome = Outcome::Propagation;
        else if (run.u_station < theta)
            run.outcome = Outcome::Blocking;
        else
            run.outcome = Outcome::Undecided;
    });
    detail::classify_sweep(rep.runs, rep.single_transition, rep.transition);
    return rep;
}

}  // namespace frontlab
