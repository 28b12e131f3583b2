#include "frontlab/harness/config.hpp"
#include "frontlab/harness/emit.hpp"
#include "frontlab/harness/experiments.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace frontlab;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("frontlab_test_" + name);
    fs::remove_all(d);
    return d;
}

/// Captures the kind, path and message of the Error thrown by `f`.
template <class F>
Error caught(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e;
    }
    FAIL("no Error thrown");
    return Error(ErrorKind::IOError, "unreachable");
}

// A config cheap enough for end-to-end runs.
const char* kSmallRun = R"({
  "wave": {"h": 0.05},
  "sim1d": {"x_min": -30, "x_max": 30, "h": 0.1, "dt": 0.05, "t_end": 3},
  "outputs": {"cadence": 1}
})";

}  // namespace

TEST_CASE("minimal config gets the documented defaults", "[harness][config]") {
    const auto lc = load_config_text("{}");
    const auto& c = lc.config;
    REQUIRE(c.nonlinearity.kind == "cubic");
    REQUIRE(c.nonlinearity.theta == 0.25);
    REQUIRE(c.wave.xi_min == -40.0);
    REQUIRE(c.wave.xi_max == 40.0);
    REQUIRE(c.wave.h == 0.01);
    REQUIRE(c.spectral.h == 0.005);
    REQUIRE(c.sim1d.h == 0.05);
    REQUIRE(c.sim1d.dt == 0.01);
    REQUIRE(c.sim1d.t_end == 50.0);
    REQUIRE(c.sim1d.heterogeneity.kind == "none");
    REQUIRE(c.sim2d.nz == 16);
    REQUIRE(c.outputs.directory == "out");
    REQUIRE(c.seed == 0);
    REQUIRE(lc.profile);
    REQUIRE(lc.profile->c == Approx(std::sqrt(2.0) / 4.0).margin(1e-8));
}

TEST_CASE("config errors carry the field path", "[harness][config]") {
    SECTION("unknown key") {
        const auto e = caught([] { (void)load_config_text(R"({"sim1d": {"hh": 0.1}})"); });
        REQUIRE(e.kind() == ErrorKind::ValidationError);
        REQUIRE(e.path() == "sim1d.hh");
    }
    SECTION("unknown top-level block") {
        REQUIRE(caught([] { (void)load_config_text(R"({"sim3d": {}})"); }).path() == "sim3d");
    }
    SECTION("wrong type") {
        const auto e = caught([] { (void)load_config_text(R"({"wave": {"h": "small"}})"); });
        REQUIRE(e.path() == "wave.h");
    }
    SECTION("enumerated string") {
        const auto e = caught([] { (void)load_config_text(R"({"sim1d": {"scheme": "rk4"}})"); });
        REQUIRE(e.path() == "sim1d.scheme");
    }
    SECTION("malformed text reports line and column") {
        const auto e = caught([] { (void)load_config_text("{\n  \"wave\": {\"h\": }\n}", "run.json"); });
        REQUIRE(e.kind() == ErrorKind::ParseError);
        const std::string msg = e.what();
        REQUIRE(msg.find("run.json") != std::string::npos);
        REQUIRE(msg.find("line 2") != std::string::npos);
    }
    SECTION("missing file") {
        REQUIRE(caught([] { (void)load_config("/nonexistent/run.json"); }).kind() == ErrorKind::IOError);
    }
}

TEST_CASE("bistability and rate constraints are checked eagerly", "[harness][config]") {
    SECTION("theta above one half") {
        const auto e = caught([] { (void)load_config_text(R"({"nonlinearity": {"theta": 0.6}})"); });
        REQUIRE(e.kind() == ErrorKind::ValidationError);
        REQUIRE(e.path() == "nonlinearity.theta");
        REQUIRE(std::string(e.what()).find("integral of f > 0") != std::string::npos);
    }
    SECTION("kappa above -lambda - c/2") {
        // -lambda - c/2 = 1/sqrt(2) - sqrt(2)/8 for theta = 1/4.
        const double bound = 1.0 / std::sqrt(2.0) - std::sqrt(2.0) / 8.0;
        REQUIRE(bound == Approx(0.5303).margin(1e-4));
        const auto e = caught([] { (void)load_config_text(R"({"sim2d": {"domain": {"kappa": 0.9}}})"); });
        REQUIRE(e.kind() == ErrorKind::ValidationError);
        REQUIRE(e.path() == "sim2d.domain.kappa");
        REQUIRE(std::string(e.what()).find("0.5303") != std::string::npos);

        const auto e1 = caught([] {
            (void)load_config_text(R"({"sim1d": {"heterogeneity": {"kind": "sigmoid", "A": 0.5, "kappa": 0.9}}})");
        });
        REQUIRE(e1.path() == "sim1d.heterogeneity.kappa");
    }
    SECTION("kappa inside the bound") {
        REQUIRE_NOTHROW(load_config_text(R"({"sim2d": {"domain": {"kappa": 0.5}}})"));
    }
    SECTION("domain errors are re-anchored under sim2d") {
        const auto e = caught([] {
            (void)load_config_text(R"({"sim2d": {"domain": {"b_plus": {"limit": 1, "amplitude": -0.99, "rate": 0.25, "center": 0}}}})");
        });
        REQUIRE(e.path().rfind("sim2d.", 0) == 0);
    }
}

TEST_CASE("canonical form is idempotent and hashed deterministically", "[harness][config]") {
    const std::string text = R"({
      "seed": 7,
      "sim1d": {"heterogeneity": {"kind": "sigmoid", "A": 0.5, "kappa": 0.25}, "M": 60, "t_end": 60, "x_max": 80},
      "sim2d": {"domain": {"b_plus": {"limit": 1, "amplitude": 0.5, "rate": 0.25, "center": 0}}}
    })";
    const auto a = parse_config(parse_json_text(text));
    const std::string once = canonical_text(a);
    const std::string twice = canonical_text(parse_config(json::parse(once)));
    REQUIRE(once == twice);
    REQUIRE(config_hash(a) == config_hash(parse_config(json::parse(once))));
    REQUIRE(config_hash(a).size() == 16);
    REQUIRE(config_hash(a).find_first_not_of("0123456789abcdef") == std::string::npos);

    // Key order and whitespace do not matter; values do.
    const auto reordered = parse_config(parse_json_text(
        R"({"sim2d": {"domain": {"b_plus": {"center": 0, "rate": 0.25, "amplitude": 0.5, "limit": 1}}},
            "sim1d": {"x_max": 80, "t_end": 60, "M": 60, "heterogeneity": {"kappa": 0.25, "A": 0.5, "kind": "sigmoid"}},
            "seed": 7})"));
    REQUIRE(config_hash(reordered) == config_hash(a));
    auto changed = a;
    changed.seed = 8;
    REQUIRE(config_hash(changed) != config_hash(a));
}

TEST_CASE("float formatting round-trips", "[harness][emit]") {
    oracle::Rng rng(99);
    for (int k = 0; k < 1000; ++k) {
        const double v = std::ldexp(rng.uniform(-1.0, 1.0), int(rng.uniform(-60, 60)));
        REQUIRE(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
    REQUIRE(format_double(0.1) == "0.10000000000000001");
    REQUIRE(format_double(std::nan("")) == "nan");
    REQUIRE(format_double(-INFINITY) == "-inf");
}

TEST_CASE("CSV and JSON emission", "[harness][emit]") {
    CsvTable t{{"t", "chi", "sup_err", "w_l2", "front_pos"}, {}};
    SECTION("empty trajectory gives a header-only CSV") {
        REQUIRE(to_csv_text(t) == "t,chi,sup_err,w_l2,front_pos\n");
    }
    SECTION("three snapshots give four LF-terminated lines") {
        for (int k = 0; k < 3; ++k) t.add({double(k), 0.0, 1e-3, 0.5, double(k) / 4});
        const auto text = to_csv_text(t);
        REQUIRE(std::count(text.begin(), text.end(), '\n') == 4);
        REQUIRE(text.find('\r') == std::string::npos);
        REQUIRE(text.substr(0, text.find("1,0,")) == "t,chi,sup_err,w_l2,front_pos\n0,0,0.001,0.5,0\n");
    }
    SECTION("row width is checked") {
        REQUIRE_THROWS_AS(t.add({1.0}), Error);
    }
    SECTION("mixed cells") {
        CsvTable s{{"n", "outcome", "d"}, {}};
        s.add({10LL, std::string("BLOCKING"), 0.5});
        REQUIRE(to_csv_text(s) == "n,outcome,d\n10,BLOCKING,0.5\n");
    }
    SECTION("JSON sorts keys and writes non-finite numbers as null") {
        const json j = {{"b", 1.5}, {"a", std::nan("")}, {"c", {1, 2}}};
        REQUIRE(to_json_text(j) == "{\n  \"a\": null,\n  \"b\": 1.5,\n  \"c\": [1, 2]\n}\n");
    }
    SECTION("atomic write replaces the file and leaves no temporary") {
        const auto d = scratch_dir("emit");
        emit_csv(d / "x.csv", t);
        t.add({1.0, 2.0, 3.0, 4.0, 5.0});
        emit_csv(d / "x.csv", t);
        REQUIRE(slurp(d / "x.csv") == to_csv_text(t));
        REQUIRE_FALSE(fs::exists(d / "x.csv.tmp"));
        fs::remove_all(d);
    }
    SECTION("unwritable target") {
        const auto d = scratch_dir("blocked");
        fs::create_directories(d);
        std::ofstream(d / "file") << "x";
        REQUIRE(caught([&] { emit_csv(d / "file" / "x.csv", t); }).kind() == ErrorKind::IOError);
        fs::remove_all(d);
    }
}

TEST_CASE("experiment registry", "[harness][experiments]") {
    const auto lc = load_config_text(kSmallRun);

    SECTION("unknown name") {
        const auto e = caught([&] { (void)run_experiment(lc, "wave2", scratch_dir("unknown")); });
        REQUIRE(e.kind() == ErrorKind::UnknownExperiment);
        REQUIRE(std::string(e.what()).find("blocking") != std::string::npos);
    }
    SECTION("every listed name is registered") {
        REQUIRE(experiment_names().size() == 10);
    }
    SECTION("wave outputs and record") {
        const auto d = scratch_dir("wave");
        const auto rec = run_experiment(lc, "wave", d);
        REQUIRE(rec.name == "wave");
        REQUIRE(rec.config_hash == lc.hash);
        REQUIRE(rec.files == std::vector<std::string>{"wave.csv", "wave.json"});
        REQUIRE(rec.started.size() == 20);
        REQUIRE(slurp(d / "wave.csv").rfind("xi,phi,phi_prime\n", 0) == 0);
        const auto s = json::parse(slurp(d / "wave.json"));
        for (const char* k : {"c", "lambda", "mu", "residual_inf", "C1", "C2"}) REQUIRE(s.contains(k));
        REQUIRE(s["c"].get<double>() == Approx(std::sqrt(2.0) / 4.0).margin(1e-4));
        fs::remove_all(d);
    }
    SECTION("run1d trajectory has one row per snapshot") {
        const auto d = scratch_dir("run1d");
        const auto rec = run_experiment(lc, "run1d", d);
        const auto text = slurp(d / "traj.csv");
        REQUIRE(text.rfind("t,chi,sup_err,w_l2,front_pos\n", 0) == 0);
        REQUIRE(std::count(text.begin(), text.end(), '\n') == 5);  // t = 0, 1, 2, 3
        for (const char* k : {"gamma", "K", "r_squared", "N0_est", "blocked"}) REQUIRE(rec.summary.contains(k));
        REQUIRE(rec.summary["blocked"] == false);
        fs::remove_all(d);
    }
    SECTION("field dumps") {
        auto cfg = lc.config;
        cfg.outputs.fields = true;
        cfg.sim1d.t_end = 1.0;
        const auto d = scratch_dir("fields");
        const auto rec = run_experiment(validate_config(cfg), "run1d", d);
        REQUIRE(fs::exists(d / "u_t0.csv"));
        REQUIRE(fs::exists(d / "u_t1.csv"));
        REQUIRE(slurp(d / "u_t1.csv").rfind("x,u\n", 0) == 0);
        fs::remove_all(d);
    }
    SECTION("module errors name the experiment") {
        auto cfg = lc.config;
        cfg.sim2d.supersol.r = 5.0;  // larger than the admissible ball
        const auto e = caught([&] { (void)run_experiment(validate_config(cfg), "supersol", scratch_dir("ss")); });
        REQUIRE(e.kind() == ErrorKind::ParameterViolation);
        REQUIRE(std::string(e.what()).find("experiment supersol") != std::string::npos);
        REQUIRE(e.path() == "sim2d.supersol");
    }
}

TEST_CASE("same config gives byte-identical outputs", "[harness][experiments]") {
    const auto lc = load_config_text(kSmallRun);
    for (const char* name : {"wave", "gap", "run1d"}) {
        const auto a = scratch_dir(std::string("det_a_") + name);
        const auto b = scratch_dir(std::string("det_b_") + name);
        const auto ra = run_experiment(lc, name, a);
        const auto rb = run_experiment(lc, name, b);
        REQUIRE(ra.files == rb.files);
        for (const auto& f : ra.files) {
            INFO(name << " / " << f);
            REQUIRE(slurp(a / f) == slurp(b / f));
        }
        fs::remove_all(a);
        fs::remove_all(b);
    }
}
