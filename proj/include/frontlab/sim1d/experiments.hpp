#pragma once

#include "frontlab/core/error.hpp"
#include "frontlab/core/fit.hpp"
#include "frontlab/core/parallel.hpp"
#include "frontlab/sim1d/stepper.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace frontlab {

/// Space-time window [-T0, T0] x [x_lo, x_hi] on which consecutive runs are
/// compared, sampled every `sample_every` time units.
struct EntireWindow {
    double T0 = 5.0;
    double x_lo = -20.0;
    double x_hi = 20.0;
    double sample_every = 0.5;
};

struct EntireSequenceReport {
    std::vector<int> n;
    std::vector<double> d;  ///< d[k] = sup |u_{n[k+1]} - u_{n[k]}| on the window
    bool strictly_decreasing = false;
    double log_rate = std::numeric_limits<double>::quiet_NaN();  ///< slope of log d against n
};

namespace detail {

inline void check_increasing(const std::vector<int>& n_list) {
    if (n_list.empty()) throw Error(ErrorKind::ValidationError, "n_list is empty", "entire.n_list");
    for (std::size_t k = 1; k < n_list.size(); ++k)
        if (n_list[k] <= n_list[k - 1])
            throw Error(ErrorKind::ValidationError, "n_list must be increasing", "entire.n_list");
}

inline void finish_sequence(EntireSequenceReport& rep) {
    rep.strictly_decreasing = rep.d.size() >= 2;
    for (std::size_t k = 1; k < rep.d.size(); ++k)
        if (!(rep.d[k] < rep.d[k - 1])) rep.strictly_decreasing = false;
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < rep.d.size(); ++k)
        if (rep.d[k] > 0.0) {
            xs.push_back(rep.n[k]);
            ys.push_back(std::log(rep.d[k]));
        }
    if (xs.size() >= 2) rep.log_rate = fit_line(xs, ys).slope;
}

}  // namespace detail

/// Runs u_n from t = -n with datum phi(x + c n) up to t = T0 and measures the
/// distance between consecutive members of the sequence on the window.
inline EntireSequenceReport entire_solution_sequence(const Sim1DConfig& base, const std::vector<int>& n_list,
                                                     const EntireWindow& window = {}) {
    detail::check_increasing(n_list);
    struct Sampled {
        std::vector<double> t;
        std::vector<std::vector<double>> u;  // window columns only
    };
    std::vector<Sampled> runs(n_list.size());
    parallel_for(n_list.size(), [&](std::size_t k) {
        Sim1DConfig cfg = base;
        cfg.t_start = -double(n_list[k]);
        cfg.t_end = window.T0;
        cfg.snapshot_every = window.sample_every;
        cfg.keep_fields = true;
        cfg.track = false;
        cfg.initial.kind = InitialKind::Wave;
        const auto traj = run_cauchy_1d(cfg);
        for (const auto& s : traj.snapshots) {
            if (s.t < -window.T0 - 1e-9) continue;
            std::vector<double> cols;
            for (std::size_t i = 0; i < traj.x.size(); ++i)
                if (traj.x[i] >= window.x_lo - 1e-12 && traj.x[i] <= window.x_hi + 1e-12) cols.push_back(s.u[i]);
            runs[k].t.push_back(s.t);
            runs[k].u.push_back(std::move(cols));
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

enum class Outcome { Propagation, Blocking, Undecided };

constexpr std::string_view to_string(Outcome o) {
    switch (o) {
    case Outcome::Propagation: return "PROPAGATION";
    case Outcome::Blocking: return "BLOCKING";
    case Outcome::Undecided: return "UNDECIDED";
    }
    return "UNDECIDED";
}

/// Which plateau parameter the sweep varies.
enum class ThresholdMode { Amplitude, Width };

struct ThresholdSpec {
    ThresholdMode mode = ThresholdMode::Width;
    double A = -1.0;           ///< plateau height (fixed in Width mode)
    double x_left = 10.0;      ///< start of the plateau
    double width = 30.0;       ///< plateau length (fixed in Amplitude mode)
    double smoothing = 0.1;
    double margin = 10.0;      ///< propagation: front beyond x_right + margin
    double station_offset = 5.0;  ///< blocking: u < theta at x_right + offset at t_end
};

struct ThresholdRun {
    double parameter = 0.0;
    Outcome outcome = Outcome::Undecided;
    double max_front = std::numeric_limits<double>::quiet_NaN();
    double final_front = std::numeric_limits<double>::quiet_NaN();
    double u_station = std::numeric_limits<double>::quiet_NaN();
};

struct ThresholdReport {
    std::vector<ThresholdRun> runs;
    bool single_transition = false;  ///< PROPAGATION...PROPAGATION BLOCKING...BLOCKING
    double transition = std::numeric_limits<double>::quiet_NaN();  ///< midpoint of the switching pair
    double minus_varpi = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

/// Checks that outcomes switch once from Propagation to Blocking in sweep
/// order and returns the midpoint of the switching parameters.
template <class Run>
void classify_sweep(const std::vector<Run>& runs, bool& single, double& transition) {
    single = false;
    transition = std::numeric_limits<double>::quiet_NaN();
    std::size_t k = 0;
    while (k < runs.size() && runs[k].outcome == Outcome::Propagation) ++k;
    const std::size_t first_block = k;
    while (k < runs.size() && runs[k].outcome == Outcome::Blocking) ++k;
    if (k != runs.size() || first_block == 0 || first_block == runs.size()) return;
    single = true;
    transition = 0.5 * (runs[first_block - 1].parameter + runs[first_block].parameter);
}

}  // namespace detail

/// Sweeps a negative plateau g = A on [x_left, x_left + width] and classifies
/// each run. `varpi` is reported as -varpi next to the empirical transition.
inline ThresholdReport threshold_exploration(const Sim1DConfig& base, const ThresholdSpec& spec,
                                             const std::vector<double>& parameters, double varpi) {
    ThresholdReport rep;
    rep.minus_varpi = -varpi;
    rep.runs.resize(parameters.size());
    const double theta = base.profile->theta();
    parallel_for(parameters.size(), [&](std::size_t k) {
        const double p = parameters[k];
        const double A = spec.mode == ThresholdMode::Amplitude ? p : spec.A;
        const double width = spec.mode == ThresholdMode::Width ? p : spec.width;
        const double x_right = spec.x_left + width;
        Sim1DConfig cfg = base;
        cfg.het = Heterogeneity1D::gap(A, spec.x_left, x_right, spec.smoothing, 0.0);
        cfg.track = false;
        cfg.keep_fields = false;
        const auto traj = run_cauchy_1d(cfg);

        ThresholdRun& run = rep.runs[k];
        run.parameter = p;
        run.max_front = -std::numeric_limits<double>::infinity();
        for (const auto& s : traj.snapshots)
            if (std::isfinite(s.front_pos)) run.max_front = std::max(run.max_front, s.front_pos);
        run.final_front = traj.snapshots.back().front_pos;
        const UniformField field{cfg.x_min, cfg.h, traj.u_final};
        run.u_station = field.at(x_right + spec.station_offset);
        if (run.max_front > x_right + spec.margin)
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
