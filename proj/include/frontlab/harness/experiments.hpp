#pragma once

#include "frontlab/core/error.hpp"
#include "frontlab/harness/acceptance.hpp"
#include "frontlab/harness/config.hpp"
#include "frontlab/harness/emit.hpp"
#include "frontlab/sim1d/diagnostics.hpp"
#include "frontlab/sim1d/experiments.hpp"
#include "frontlab/sim2d/experiments.hpp"
#include "frontlab/sim2d/supersolution.hpp"
#include "frontlab/spectral.hpp"

#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace frontlab {

struct ExperimentRecord {
    std::string name;
    std::string config_hash;
    std::string started;   ///< UTC, ISO 8601
    std::string finished;
    nlohmann::json summary;
    std::vector<std::string> files;  ///< written outputs, relative to the output directory
    bool pass = true;                ///< false only for a failed acceptance run
};

inline nlohmann::json to_json(const ExperimentRecord& r) {
    return {{"name", r.name},         {"config_hash", r.config_hash}, {"started", r.started},
            {"finished", r.finished}, {"summary", r.summary},         {"files", r.files}};
}

namespace detail {

inline std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Snapshot times become file-name tags: 10 -> "10", 2.5 -> "2.5".
inline std::string time_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", t);
    return buf;
}

class Outputs {
public:
    explicit Outputs(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void csv(const std::string& name, const CsvTable& t) {
        emit_csv(dir_ / name, t);
        files_.push_back(name);
    }
    void json(const std::string& name, const nlohmann::json& j) {
        emit_json(dir_ / name, j);
        files_.push_back(name);
    }
    std::vector<std::string> files() const { return files_; }

private:
    std::filesystem::path dir_;
    std::vector<std::string> files_;
};

inline json wave_experiment(const LoadedConfig& lc, Outputs& out) {
    const auto& p = *lc.profile;
    const auto tail = check_tail_estimates(p);
    CsvTable t{{"xi", "phi", "phi_prime"}, {}};
    for (std::size_t i = 0; i < p.size(); ++i) t.add({p.xi[i], p.phi[i], p.phi_prime[i]});
    out.csv("wave.csv", t);
    const json s = {{"c", p.c},           {"lambda", p.lambda}, {"mu", p.mu},
                    {"residual_inf", p.residual_inf}, {"C1", tail.C1},       {"C2", tail.C2}};
    out.json("wave.json", s);
    return s;
}

inline SpectralReport gap_report(const LoadedConfig& lc) {
    const auto& w = lc.config.wave;
    WaveSolveOptions opt;
    opt.tol = w.tol;
    return spectral_gap(solve_wave(make_nonlinearity(lc.config), WaveGrid::make(w.xi_min, w.xi_max, lc.config.spectral.h), opt));
}

inline json gap_experiment(const LoadedConfig& lc, Outputs& out) {
    const auto g = gap_report(lc);
    const json s = {{"rho0", g.rho0}, {"rho1", g.rho1},         {"varpi", g.varpi},
                    {"h", g.h},       {"xi_min", g.xi_min},     {"xi_max", g.xi_max}};
    out.json("gap.json", s);
    return s;
}

/// The front is blocked when, over the last quarter of the run, it advanced
/// by less than a tenth of the distance the wave covers at speed c.
inline bool front_blocked(const RunTrajectory& traj) {
    const auto& s = traj.snapshots;
    if (s.size() < 2) return false;
    const double t1 = s.back().t, t0 = s.front().t + 0.75 * (t1 - s.front().t);
    std::size_t k = 0;
    while (k + 1 < s.size() && s[k].t < t0) ++k;
    const double moved = s.back().front_pos - s[k].front_pos;
    if (!std::isfinite(moved)) return false;
    return moved < 0.1 * traj.c * (t1 - s[k].t);
}

inline json run1d_experiment(const LoadedConfig& lc, Outputs& out) {
    const auto& c = lc.config;
    Sim1DConfig cfg = make_sim1d(c, lc.profile);
    cfg.keep_fields = c.outputs.fields;
    const auto ctx = build_projection(lc.profile);
    const auto traj = run_cauchy_1d(cfg, &ctx);

    CsvTable t{{"t", "chi", "sup_err", "w_l2", "front_pos"}, {}};
    for (const auto& s : traj.snapshots) t.add({s.t, s.chi, s.sup_err, s.w_l2, s.front_pos});
    out.csv("traj.csv", t);
    if (c.outputs.fields)
        for (const auto& s : traj.snapshots) {
            CsvTable f{{"x", "u"}, {}};
            for (std::size_t i = 0; i < traj.x.size(); ++i) f.add({traj.x[i], s.u[i]});
            out.csv("u_t" + time_tag(s.t) + ".csv", f);
        }

    const double M = c.sim1d.M;
    double t_hi = c.sim1d.fit.t_hi;
    if (!std::isfinite(t_hi)) t_hi = M > 0.0 ? 0.8 * M / traj.c : cfg.t_end;
    json s = {{"gamma", nullptr}, {"K", nullptr}, {"r_squared", nullptr}, {"N0_est", nullptr}, {"flagged", nullptr}};
    try {
        const auto fit = decay_fit(traj, M, c.sim1d.fit.t_lo, t_hi, c.sim1d.eps1);
        s = {{"gamma", fit.gamma},
             {"K", fit.K},
             {"r_squared", fit.r_squared},
             {"N0_est", number_or_null(fit.N0_est)},
             {"flagged", fit.flagged}};
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::EmptyWindow) throw;
    }
    s["blocked"] = front_blocked(traj);
    s["tracking_lost"] = traj.tracking_lost;
    out.json("run1d.json", s);
    return s;
}

inline json run2d_experiment(const LoadedConfig& lc, Outputs& out) {
    const auto& c = lc.config;
    Sim2DConfig cfg = make_sim2d(c, lc.profile);
    cfg.keep_fields = c.outputs.fields;
    const auto ctx = build_projection(lc.profile);
    const auto traj = run_cauchy_2d(cfg, &ctx);
    const auto& g = traj.grid;

    CsvTable t{{"t", "mean_front", "chi_min", "chi_max", "sup_err", "R1_sup", "R2_sup"}, {}};
    double worst = 0.0, r1 = 0.0, r2 = 0.0;
    for (const auto& s : traj.snapshots) {
        t.add({s.t, s.mean_front, s.chi_min, s.chi_max, s.sup_err, s.R1_sup, s.R2_sup});
        worst = std::max(worst, s.sup_err);
        r1 = std::max(r1, s.R1_sup);
        r2 = std::max(r2, s.R2_sup);
    }
    out.csv("traj2d.csv", t);
    if (c.outputs.fields)
        for (const auto& s : traj.snapshots) {
            CsvTable f{{"x", "z", "u"}, {}};
            for (std::size_t i = 0; i < g.nx; ++i)
                for (std::size_t j = 0; j < g.nz; ++j) f.add({g.x(i), g.z(j), s.u[g.idx(i, j)]});
            out.csv("u2d_t" + time_tag(s.t) + ".csv", f);
        }
    const json s = {{"snapshots", traj.snapshots.size()},
                    {"final_mean_front", number_or_null(traj.snapshots.back().mean_front)},
                    {"max_sup_err", worst},
                    {"max_R1_sup", r1},
                    {"max_R2_sup", r2},
                    {"tracking_lost", traj.tracking_lost}};
    out.json("run2d.json", s);
    return s;
}

inline json supersol_experiment(const LoadedConfig& lc, Outputs& out) {
    const auto& c = lc.config;
    const auto& ss = c.sim2d.supersol;
    const auto d = make_domain(c);
    const auto g = build_grid(d, c.sim2d.x_min, c.sim2d.x_max, ss.hx, ss.nz);
    const auto& nl = lc.profile->nonlinearity;
    const double delta = std::isfinite(ss.delta) ? ss.delta : -1.0;
    SupersolutionParams p;
    Supersolution2D sup;
    try {
        p = derive_supersolution_parameters(d, nl, lc.profile->c, ss.r, delta);
        sup = build_supersolution(d, g, nl, lc.profile->c, p);
    } catch (const Error& e) {
        throw e.at("sim2d.supersol");
    }
    const auto chk = verify_supersolution(g, sup, nl, ss.t);
    const json s = {{"alpha", p.alpha},
                    {"a", p.a},
                    {"r", p.r},
                    {"min_slack_interior", number_or_null(chk.min_slack_interior)},
                    {"min_slack_boundary", number_or_null(chk.min_slack_boundary)},
                    {"pass", chk.pass}};
    out.json("supersol.json", s);
    return s;
}

inline json sequence_outputs(const EntireSequenceReport& rep, const std::string& stem, Outputs& out) {
    CsvTable t{{"n", "d"}, {}};
    for (std::size_t k = 0; k < rep.d.size(); ++k) t.add({static_cast<long long>(rep.n[k]), rep.d[k]});
    out.csv(stem + ".csv", t);
    const json s = {{"n", rep.n},
                    {"d", rep.d},
                    {"strictly_decreasing", rep.strictly_decreasing},
                    {"log_rate", number_or_null(rep.log_rate)}};
    out.json(stem + ".json", s);
    return s;
}

inline json entire1d_experiment(const LoadedConfig& lc, Outputs& out) {
    const auto& e = lc.config.sim1d.entire;
    const auto rep = entire_solution_sequence(make_sim1d(lc.config, lc.profile), e.n_list, make_window(e));
    return sequence_outputs(rep, "entire1d", out);
}

inline json entire2d_experiment(const LoadedConfig& lc, Outputs& out) {
    const auto& e = lc.config.sim2d.entire;
    const auto rep = entire_solution_sequence_2d(make_sim2d(lc.config, lc.profile), e.n_list, make_window(e));
    return sequence_outputs(rep, "entire2d", out);
}

template <class Run>
CsvTable sweep_table(const std::vector<Run>& runs) {
    CsvTable t{{"parameter", "outcome", "max_front", "final_front", "u_station"}, {}};
    for (const auto& r : runs)
        t.add({r.parameter, std::string(to_string(r.outcome)), r.max_front, r.final_front, r.u_station});
    return t;
}

inline json threshold_experiment(const LoadedConfig& lc, Outputs& out) {
    const auto& th = lc.config.sim1d.threshold;
    ThresholdSpec spec;
    spec.mode = th.mode == "amplitude" ? ThresholdMode::Amplitude : ThresholdMode::Width;
    spec.A = th.A;
    spec.x_left = th.x_left;
    spec.width = th.width;
    spec.smoothing = th.smoothing;
    spec.margin = th.margin;
    spec.station_offset = th.station_offset;
    const double varpi = gap_report(lc).varpi;
    const auto rep = threshold_exploration(make_sim1d(lc.config, lc.profile), spec, th.params, varpi);
    out.csv("threshold.csv", sweep_table(rep.runs));
    const json s = {{"mode", th.mode},
                    {"single_transition", rep.single_transition},
                    {"transition", number_or_null(rep.transition)},
                    {"minus_varpi", rep.minus_varpi}};
    out.json("threshold.json", s);
    return s;
}

inline json blocking_experiment(const LoadedConfig& lc, Outputs& out) {
    const auto& b = lc.config.sim2d.blocking;
    WideningFamily family;
    family.ratio = b.ratio;
    family.x0 = b.x0;
    family.kappa = lc.config.sim2d.domain.kappa;
    family.margin = b.margin;
    family.station_offset = b.station_offset;
    const auto rep = blocking_exploration(make_sim2d(lc.config, lc.profile), family, b.lengths);
    out.csv("blocking.csv", sweep_table(rep.runs));
    const json s = {{"ratio", b.ratio},
                    {"single_transition", rep.single_transition},
                    {"transition", number_or_null(rep.transition)}};
    out.json("blocking.json", s);
    return s;
}

inline json accept_experiment(const LoadedConfig& lc, Outputs& out, bool& pass) {
    AcceptanceOptions opt;
    opt.seed = lc.config.seed;
    const auto rep = run_acceptance(opt);
    pass = rep.pass;
    const json s = to_json(rep);
    out.json("accept.json", s);
    return s;
}

}  // namespace detail

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"wave",     "gap",      "run1d",     "run2d",    "supersol",
                                                "entire1d", "entire2d", "threshold", "blocking", "accept"};
    return names;
}

/// Runs one registered pipeline and writes its outputs under `out_dir`.
/// Module errors are re-raised with the experiment name prefixed.
inline ExperimentRecord run_experiment(const LoadedConfig& lc, const std::string& name,
                                       const std::filesystem::path& out_dir) {
    using Fn = std::function<nlohmann::json(const LoadedConfig&, detail::Outputs&, bool&)>;
    auto plain = [](nlohmann::json (*f)(const LoadedConfig&, detail::Outputs&)) {
        return Fn([f](const LoadedConfig& c, detail::Outputs& o, bool&) { return f(c, o); });
    };
    static const std::map<std::string, Fn> registry{
        {"wave", plain(detail::wave_experiment)},
        {"gap", plain(detail::gap_experiment)},
        {"run1d", plain(detail::run1d_experiment)},
        {"run2d", plain(detail::run2d_experiment)},
        {"supersol", plain(detail::supersol_experiment)},
        {"entire1d", plain(detail::entire1d_experiment)},
        {"entire2d", plain(detail::entire2d_experiment)},
        {"threshold", plain(detail::threshold_experiment)},
        {"blocking", plain(detail::blocking_experiment)},
        {"accept", Fn(detail::accept_experiment)},
    };
    const auto it = registry.find(name);
    if (it == registry.end()) {
        std::string known;
        for (const auto& n : experiment_names()) known += (known.empty() ? "" : ", ") + n;
        throw Error(ErrorKind::UnknownExperiment, "'" + name + "' is not one of: " + known);
    }
    ExperimentRecord rec;
    rec.name = name;
    rec.config_hash = lc.hash;
    rec.started = detail::utc_now();
    detail::Outputs out(out_dir);
    try {
        rec.summary = it->second(lc, out, rec.pass);
    } catch (const Error& e) {
        throw Error(e.kind(), "experiment " + name + ": " + e.detail(), e.path());
    }
    rec.finished = detail::utc_now();
    rec.files = out.files();
    return rec;
}

}  // namespace frontlab
