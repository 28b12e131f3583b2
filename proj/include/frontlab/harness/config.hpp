#pragma once

#include "frontlab/core/error.hpp"
#include "frontlab/nonlinearity.hpp"
#include "frontlab/sim1d/experiments.hpp"
#include "frontlab/sim1d/stepper.hpp"
#include "frontlab/sim2d/domain.hpp"
#include "frontlab/sim2d/stepper.hpp"
#include "frontlab/wave.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace frontlab {

using json = nlohmann::json;

struct NonlinearityConfig {
    std::string kind = "cubic";  ///< "cubic" or "tabulated"
    double theta = 0.25;
    std::vector<double> u, f;    ///< tabulated knots
};

struct WaveConfig {
    double xi_min = -40.0, xi_max = 40.0, h = 0.01, tol = 1e-10;
};

struct SpectralConfig {
    double h = 0.005;  ///< the gap is computed on the wave range at this spacing
};

struct HeterogeneityConfig {
    std::string kind = "none";  ///< "none", "sigmoid" or "gap"
    double A = 0.0, kappa = 0.25, x_left = 0.0, x_right = 0.0, smoothing = 0.1;
};

struct FitConfig {
    double t_lo = 5.0;
    double t_hi = std::numeric_limits<double>::quiet_NaN();  ///< null: 0.8 M/c, or t_end when M = 0
};

struct EntireConfig {
    std::vector<int> n_list{10, 20, 30, 40, 50};
    double T0 = 5.0, x_lo = -20.0, x_hi = 20.0, sample_every = 0.5;
};

struct ThresholdConfig {
    std::string mode = "width";  ///< "width" or "amplitude"
    double A = -1.0, x_left = 10.0, width = 30.0, smoothing = 0.1, margin = 10.0, station_offset = 5.0;
    std::vector<double> params{0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 30.0};
};

struct Sim1DBlock {
    double x_min = -60.0, x_max = 60.0, h = 0.05, dt = 0.01, t_start = 0.0, t_end = 50.0, M = 0.0;
    std::string scheme = "imex_cn";  ///< "imex_cn" or "implicit"
    std::string left_bc = "dirichlet", right_bc = "robin";
    bool richardson = false;
    bool track = true;
    double eps1 = 0.1;
    HeterogeneityConfig heterogeneity;
    FitConfig fit;
    EntireConfig entire;
    ThresholdConfig threshold;
};

struct SupersolConfig {
    double r = 0.2;
    double delta = std::numeric_limits<double>::quiet_NaN();  ///< null: |f'(0)|/4
    double t = 0.0;
    double hx = 0.02;
    std::size_t nz = 40;
};

struct BlockingConfig {
    double ratio = 8.0, x0 = 0.0, margin = 10.0, station_offset = 5.0;
    std::vector<double> lengths{40.0, 10.0, 2.5, 1.25, 0.5};
};

struct Sim2DBlock {
    DomainParams domain;
    double x_min = -60.0, x_max = 40.0, hx = 0.05, dt = 0.01, t_start = 0.0, t_end = 50.0, M = 0.0;
    std::size_t nz = 16;
    bool track = true;
    double eps1 = 0.1;
    SupersolConfig supersol;
    EntireConfig entire;
    BlockingConfig blocking;
};

struct OutputsConfig {
    std::string directory = "out";
    double cadence = 1.0;
    bool fields = false;  ///< write u_t<t>.csv / u2d_t<t>.csv at every snapshot
};

struct RunConfig {
    NonlinearityConfig nonlinearity;
    WaveConfig wave;
    SpectralConfig spectral;
    Sim1DBlock sim1d;
    Sim2DBlock sim2d;
    OutputsConfig outputs;
    std::uint64_t seed = 0;
};

namespace detail {

/// Walks one JSON object, remembering which keys were read so that the
/// leftovers can be rejected.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw Error(ErrorKind::ValidationError, "expected an object", path_);
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json* find(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out, bool nullable = false) {
        const json* v = find(key);
        if (!v) return;
        if (nullable && v->is_null()) {
            out = std::numeric_limits<double>::quiet_NaN();
            return;
        }
        if (!v->is_number()) throw Error(ErrorKind::ValidationError, "expected a number", at(key));
        out = v->get<double>();
        if (!std::isfinite(out)) throw Error(ErrorKind::ValidationError, "expected a finite number", at(key));
    }

    template <class Int>
    void integer(const std::string& key, Int& out) {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_number_integer()) throw Error(ErrorKind::ValidationError, "expected an integer", at(key));
        if (v->is_number_unsigned()) {
            out = static_cast<Int>(v->get<std::uint64_t>());
        } else {
            const auto s = v->get<std::int64_t>();
            if (std::is_unsigned_v<Int> && s < 0)
                throw Error(ErrorKind::ValidationError, "expected a non-negative integer", at(key));
            out = static_cast<Int>(s);
        }
    }

    void boolean(const std::string& key, bool& out) {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_boolean()) throw Error(ErrorKind::ValidationError, "expected true or false", at(key));
        out = v->get<bool>();
    }

    void string(const std::string& key, std::string& out, std::initializer_list<const char*> allowed = {}) {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_string()) throw Error(ErrorKind::ValidationError, "expected a string", at(key));
        out = v->get<std::string>();
        if (allowed.size() == 0) return;
        std::string list;
        for (const char* a : allowed) {
            if (out == a) return;
            list += (list.empty() ? "" : ", ") + std::string(a);
        }
        throw Error(ErrorKind::ValidationError, "'" + out + "' is not one of: " + list, at(key));
    }

    template <class T>
    void list(const std::string& key, std::vector<T>& out) {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_array()) throw Error(ErrorKind::ValidationError, "expected an array", at(key));
        out.clear();
        for (std::size_t i = 0; i < v->size(); ++i) {
            const auto& e = (*v)[i];
            const bool ok = std::is_integral_v<T> ? e.is_number_integer() : e.is_number();
            if (!ok)
                throw Error(ErrorKind::ValidationError,
                            std::is_integral_v<T> ? "expected an integer" : "expected a number",
                            at(key) + "[" + std::to_string(i) + "]");
            out.push_back(e.get<T>());
        }
    }

    std::optional<ObjectReader> child(const std::string& key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        return ObjectReader(*v, at(key));
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw Error(ErrorKind::ValidationError, "unknown key", at(it.key()));
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline void read_graph(ObjectReader& r, BoundaryGraph& g) {
    r.number("limit", g.limit);
    std::string kind = "sigmoid";
    BoundaryTerm single;
    const bool shorthand = r.find("amplitude") || r.find("rate") || r.find("center") || r.find("kind");
    if (shorthand) {
        r.string("kind", kind, {"sigmoid", "bump"});
        single.kind = kind == "sigmoid" ? TermKind::Sigmoid : TermKind::Bump;
        r.number("amplitude", single.amplitude);
        r.number("rate", single.rate);
        r.number("center", single.center);
        g.terms = {single};
    }
    if (auto terms = r.find("terms")) {
        if (shorthand)
            throw Error(ErrorKind::ValidationError, "give either one inline term or a terms list", r.at("terms"));
        if (!terms->is_array()) throw Error(ErrorKind::ValidationError, "expected an array", r.at("terms"));
        g.terms.clear();
        for (std::size_t i = 0; i < terms->size(); ++i) {
            ObjectReader t((*terms)[i], r.at("terms") + "[" + std::to_string(i) + "]");
            BoundaryTerm term;
            std::string k = "sigmoid";
            t.string("kind", k, {"sigmoid", "bump"});
            term.kind = k == "sigmoid" ? TermKind::Sigmoid : TermKind::Bump;
            t.number("amplitude", term.amplitude);
            t.number("rate", term.rate);
            t.number("center", term.center);
            t.finish();
            g.terms.push_back(term);
        }
    }
    r.finish();
}

inline void read_entire(ObjectReader& r, EntireConfig& e) {
    r.list("n_list", e.n_list);
    r.number("T0", e.T0);
    r.number("x_lo", e.x_lo);
    r.number("x_hi", e.x_hi);
    r.number("sample_every", e.sample_every);
    r.finish();
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json graph_json(const BoundaryGraph& g) {
    json terms = json::array();
    for (const auto& t : g.terms)
        terms.push_back({{"kind", t.kind == TermKind::Sigmoid ? "sigmoid" : "bump"},
                         {"amplitude", t.amplitude},
                         {"rate", t.rate},
                         {"center", t.center}});
    return {{"limit", g.limit}, {"terms", terms}};
}

inline json entire_json(const EntireConfig& e) {
    return {{"n_list", e.n_list}, {"T0", e.T0}, {"x_lo", e.x_lo}, {"x_hi", e.x_hi}, {"sample_every", e.sample_every}};
}

/// "line L, column C" for a byte offset into text.
inline std::string text_position(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

/// Every field with defaults filled in; keys sorted, so dump() is canonical.
inline json to_json(const RunConfig& c) {
    using detail::number_or_null;
    json nl = {{"kind", c.nonlinearity.kind}, {"theta", c.nonlinearity.theta}};
    if (c.nonlinearity.kind == "tabulated") {
        nl["u"] = c.nonlinearity.u;
        nl["f"] = c.nonlinearity.f;
    }
    const auto& s1 = c.sim1d;
    const auto& het = s1.heterogeneity;
    const auto& th = s1.threshold;
    const auto& s2 = c.sim2d;
    const auto& ss = s2.supersol;
    const auto& bl = s2.blocking;
    return {
        {"nonlinearity", nl},
        {"wave", {{"xi_min", c.wave.xi_min}, {"xi_max", c.wave.xi_max}, {"h", c.wave.h}, {"tol", c.wave.tol}}},
        {"spectral", {{"h", c.spectral.h}}},
        {"sim1d",
         {{"x_min", s1.x_min}, {"x_max", s1.x_max}, {"h", s1.h}, {"dt", s1.dt}, {"t_start", s1.t_start},
          {"t_end", s1.t_end}, {"M", s1.M}, {"scheme", s1.scheme}, {"left_bc", s1.left_bc},
          {"right_bc", s1.right_bc}, {"richardson", s1.richardson}, {"track", s1.track}, {"eps1", s1.eps1},
          {"heterogeneity",
           {{"kind", het.kind}, {"A", het.A}, {"kappa", het.kappa}, {"x_left", het.x_left},
            {"x_right", het.x_right}, {"smoothing", het.smoothing}}},
          {"fit", {{"t_lo", s1.fit.t_lo}, {"t_hi", number_or_null(s1.fit.t_hi)}}},
          {"entire", detail::entire_json(s1.entire)},
          {"threshold",
           {{"mode", th.mode}, {"A", th.A}, {"x_left", th.x_left}, {"width", th.width},
            {"smoothing", th.smoothing}, {"margin", th.margin}, {"station_offset", th.station_offset},
            {"params", th.params}}}}},
        {"sim2d",
         {{"domain",
           {{"b_minus", detail::graph_json(s2.domain.b_minus)}, {"b_plus", detail::graph_json(s2.domain.b_plus)},
            {"kappa", s2.domain.kappa}, {"r_ball", s2.domain.r_ball}, {"width_min", s2.domain.width_min}}},
          {"x_min", s2.x_min}, {"x_max", s2.x_max}, {"hx", s2.hx}, {"nz", s2.nz}, {"dt", s2.dt},
          {"t_start", s2.t_start}, {"t_end", s2.t_end}, {"M", s2.M}, {"track", s2.track}, {"eps1", s2.eps1},
          {"supersol",
           {{"r", ss.r}, {"delta", number_or_null(ss.delta)}, {"t", ss.t}, {"hx", ss.hx}, {"nz", ss.nz}}},
          {"entire", detail::entire_json(s2.entire)},
          {"blocking",
           {{"ratio", bl.ratio}, {"x0", bl.x0}, {"margin", bl.margin}, {"station_offset", bl.station_offset},
            {"lengths", bl.lengths}}}}},
        {"outputs",
         {{"directory", c.outputs.directory}, {"cadence", c.outputs.cadence}, {"fields", c.outputs.fields}}},
        {"seed", c.seed},
    };
}

/// Reads a config document; absent fields keep their defaults, unknown keys
/// are rejected. Only the shape and types are checked here.
inline RunConfig parse_config(const json& root) {
    RunConfig c;
    detail::ObjectReader r(root, "");
    if (auto n = r.child("nonlinearity")) {
        n->string("kind", c.nonlinearity.kind, {"cubic", "tabulated"});
        n->number("theta", c.nonlinearity.theta);
        n->list("u", c.nonlinearity.u);
        n->list("f", c.nonlinearity.f);
        n->finish();
    }
    if (auto w = r.child("wave")) {
        w->number("xi_min", c.wave.xi_min);
        w->number("xi_max", c.wave.xi_max);
        w->number("h", c.wave.h);
        w->number("tol", c.wave.tol);
        w->finish();
    }
    if (auto s = r.child("spectral")) {
        s->number("h", c.spectral.h);
        s->finish();
    }
    if (auto s = r.child("sim1d")) {
        auto& b = c.sim1d;
        s->number("x_min", b.x_min);
        s->number("x_max", b.x_max);
        s->number("h", b.h);
        s->number("dt", b.dt);
        s->number("t_start", b.t_start);
        s->number("t_end", b.t_end);
        s->number("M", b.M);
        s->string("scheme", b.scheme, {"imex_cn", "implicit"});
        s->string("left_bc", b.left_bc, {"dirichlet", "neumann"});
        s->string("right_bc", b.right_bc, {"robin", "neumann"});
        s->boolean("richardson", b.richardson);
        s->boolean("track", b.track);
        s->number("eps1", b.eps1);
        if (auto h = s->child("heterogeneity")) {
            auto& g = b.heterogeneity;
            h->string("kind", g.kind, {"none", "sigmoid", "gap"});
            h->number("A", g.A);
            h->number("kappa", g.kappa);
            h->number("x_left", g.x_left);
            h->number("x_right", g.x_right);
            h->number("smoothing", g.smoothing);
            h->finish();
        }
        if (auto f = s->child("fit")) {
            f->number("t_lo", b.fit.t_lo);
            f->number("t_hi", b.fit.t_hi, true);
            f->finish();
        }
        if (auto e = s->child("entire")) detail::read_entire(*e, b.entire);
        if (auto t = s->child("threshold")) {
            auto& th = b.threshold;
            t->string("mode", th.mode, {"width", "amplitude"});
            t->number("A", th.A);
            t->number("x_left", th.x_left);
            t->number("width", th.width);
            t->number("smoothing", th.smoothing);
            t->number("margin", th.margin);
            t->number("station_offset", th.station_offset);
            t->list("params", th.params);
            t->finish();
        }
        s->finish();
    }
    if (auto s = r.child("sim2d")) {
        auto& b = c.sim2d;
        if (auto d = s->child("domain")) {
            if (auto g = d->child("b_minus")) detail::read_graph(*g, b.domain.b_minus);
            if (auto g = d->child("b_plus")) detail::read_graph(*g, b.domain.b_plus);
            d->number("kappa", b.domain.kappa);
            d->number("r_ball", b.domain.r_ball);
            d->number("width_min", b.domain.width_min);
            d->finish();
        }
        s->number("x_min", b.x_min);
        s->number("x_max", b.x_max);
        s->number("hx", b.hx);
        s->integer("nz", b.nz);
        s->number("dt", b.dt);
        s->number("t_start", b.t_start);
        s->number("t_end", b.t_end);
        s->number("M", b.M);
        s->boolean("track", b.track);
        s->number("eps1", b.eps1);
        if (auto p = s->child("supersol")) {
            p->number("r", b.supersol.r);
            p->number("delta", b.supersol.delta, true);
            p->number("t", b.supersol.t);
            p->number("hx", b.supersol.hx);
            p->integer("nz", b.supersol.nz);
            p->finish();
        }
        if (auto e = s->child("entire")) detail::read_entire(*e, b.entire);
        if (auto k = s->child("blocking")) {
            auto& bl = b.blocking;
            k->number("ratio", bl.ratio);
            k->number("x0", bl.x0);
            k->number("margin", bl.margin);
            k->number("station_offset", bl.station_offset);
            k->list("lengths", bl.lengths);
            k->finish();
        }
        s->finish();
    }
    if (auto o = r.child("outputs")) {
        o->string("directory", c.outputs.directory);
        o->number("cadence", c.outputs.cadence);
        o->boolean("fields", c.outputs.fields);
        o->finish();
    }
    r.integer("seed", c.seed);
    r.finish();
    return c;
}

inline json parse_json_text(const std::string& text, const std::string& source = "config") {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const std::string where = detail::text_position(text, e.byte == 0 ? 0 : e.byte - 1);
        throw Error(ErrorKind::ParseError, source + ": " + where + ": " + e.what());
    }
}

inline std::string canonical_text(const RunConfig& c) { return to_json(c).dump(); }

/// 64-bit FNV-1a of the canonical config text, as 16 hex digits.
inline std::string config_hash(const RunConfig& c) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : canonical_text(c)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Builders shared by validation and the experiments.

inline Nonlinearity make_nonlinearity(const RunConfig& c) {
    const auto& n = c.nonlinearity;
    if (n.kind == "cubic") return Nonlinearity::cubic(n.theta);
    if (n.u.size() != n.f.size() || n.u.size() < 4)
        throw Error(ErrorKind::ValidationError, "u and f need the same length, at least 4 knots", "nonlinearity.f");
    return Nonlinearity::tabulated(n.u, n.f, n.theta);
}

inline Heterogeneity1D make_heterogeneity(const RunConfig& c) {
    const auto& h = c.sim1d.heterogeneity;
    if (h.kind == "sigmoid") return Heterogeneity1D::sigmoid(h.A, h.kappa, c.sim1d.M);
    if (h.kind == "gap") return Heterogeneity1D::gap(h.A, h.x_left, h.x_right, h.smoothing, c.sim1d.M);
    return Heterogeneity1D::none();
}

inline Sim1DConfig make_sim1d(const RunConfig& c, std::shared_ptr<const WaveProfile> profile) {
    const auto& b = c.sim1d;
    Sim1DConfig s;
    s.x_min = b.x_min;
    s.x_max = b.x_max;
    s.h = b.h;
    s.dt = b.dt;
    s.t_start = b.t_start;
    s.t_end = b.t_end;
    s.scheme = b.scheme == "implicit" ? Scheme::FullyImplicit : Scheme::IMEX_CN;
    s.left = b.left_bc == "neumann" ? LeftBC::Neumann : LeftBC::Dirichlet;
    s.right = b.right_bc == "neumann" ? RightBC::Neumann : RightBC::Robin;
    s.richardson = b.richardson;
    s.track = b.track;
    s.eps1 = b.eps1;
    s.snapshot_every = c.outputs.cadence;
    s.het = make_heterogeneity(c);
    s.profile = std::move(profile);
    return s;
}

inline DomainSpec2D make_domain(const RunConfig& c) {
    DomainParams p = c.sim2d.domain;
    p.x_lo = c.sim2d.x_min;
    p.x_hi = c.sim2d.x_max;
    try {
        return build_domain(p);
    } catch (const Error& e) {
        throw e.at("sim2d." + (e.path().empty() ? std::string("domain") : e.path()));
    }
}

inline Sim2DConfig make_sim2d(const RunConfig& c, std::shared_ptr<const WaveProfile> profile) {
    const auto& b = c.sim2d;
    Sim2DConfig s;
    s.domain = make_domain(c);
    s.x_min = b.x_min;
    s.x_max = b.x_max;
    s.hx = b.hx;
    s.nz_cells = b.nz;
    s.dt = b.dt;
    s.t_start = b.t_start;
    s.t_end = b.t_end;
    s.M = b.M;
    s.track = b.track;
    s.eps1 = b.eps1;
    s.snapshot_every = c.outputs.cadence;
    s.profile = std::move(profile);
    return s;
}

inline EntireWindow make_window(const EntireConfig& e) { return {e.T0, e.x_lo, e.x_hi, e.sample_every}; }

/// A parsed config plus the wave profile it determines; the profile is
/// solved once during validation and reused by the experiments.
struct LoadedConfig {
    RunConfig config;
    std::shared_ptr<const WaveProfile> profile;
    std::string canonical;
    std::string hash;
};

/// Checks every downstream precondition that can be checked before a run.
inline LoadedConfig validate_config(const RunConfig& c) {
    LoadedConfig out;
    out.config = c;
    out.canonical = canonical_text(c);
    out.hash = config_hash(c);

    const Nonlinearity nl = make_nonlinearity(c);
    for (const auto& chk : validate(nl).checks)
        if (!chk.pass)
            throw Error(ErrorKind::ValidationError,
                        "bistable hypothesis fails: " + chk.name + " (value " + std::to_string(chk.value) + ")",
                        chk.name == "integral of f > 0" ? "nonlinearity.theta" : "nonlinearity");

    if (!(c.wave.tol > 0.0)) throw Error(ErrorKind::ValidationError, "tol must be positive", "wave.tol");
    if (!(c.spectral.h > 0.0)) throw Error(ErrorKind::ValidationError, "h must be positive", "spectral.h");
    if (!(c.outputs.cadence > 0.0))
        throw Error(ErrorKind::ValidationError, "cadence must be positive", "outputs.cadence");
    const WaveGrid grid = WaveGrid::make(c.wave.xi_min, c.wave.xi_max, c.wave.h);
    WaveSolveOptions opt;
    opt.tol = c.wave.tol;
    out.profile = std::make_shared<const WaveProfile>(solve_wave(nl, grid, opt));
    const auto& p = *out.profile;

    auto check_kappa = [&](double kappa, const std::string& path) {
        if (!check_rate_constraint(kappa, p))
            throw Error(ErrorKind::ValidationError,
                        "kappa = " + std::to_string(kappa) + " must lie in (0, -lambda - c/2) = (0, " +
                            std::to_string(rate_constraint_bound(p)) + ")",
                        path);
    };
    if (c.sim1d.heterogeneity.kind == "sigmoid") check_kappa(c.sim1d.heterogeneity.kappa, "sim1d.heterogeneity.kappa");
    check_kappa(c.sim2d.domain.kappa, "sim2d.domain.kappa");

    validate(make_sim1d(c, out.profile));
    {
        Sim2DConfig s2 = make_sim2d(c, out.profile);
        (void)build_grid(s2.domain, s2.x_min, s2.x_max, s2.hx, s2.nz_cells);
        validate(s2);
    }
    if (!(c.sim2d.supersol.r > 0.0)) throw Error(ErrorKind::ValidationError, "r must be positive", "sim2d.supersol.r");
    for (const auto* e : {&c.sim1d.entire, &c.sim2d.entire}) {
        const std::string path = e == &c.sim1d.entire ? "sim1d.entire" : "sim2d.entire";
        for (std::size_t k = 0; k < e->n_list.size(); ++k)
            if (e->n_list[k] < e->T0 || (k > 0 && e->n_list[k] <= e->n_list[k - 1]))
                throw Error(ErrorKind::ValidationError, "n_list must increase and start at or after T0",
                            path + ".n_list");
    }
    return out;
}

inline LoadedConfig load_config_text(const std::string& text, const std::string& source = "config") {
    return validate_config(parse_config(parse_json_text(text, source)));
}

/// Parses a config file without the downstream checks.
inline RunConfig read_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IOError, "cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(parse_json_text(ss.str(), path));
}

inline LoadedConfig load_config(const std::string& path) { return validate_config(read_config(path)); }

}  // namespace frontlab
