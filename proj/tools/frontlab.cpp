// frontlab <experiment> [--config <path>] [--out <dir>] [--seed <u64>]
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 failed
// acceptance run.
#include "frontlab/harness/emit.hpp"
#include "frontlab/harness/experiments.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv) {
    using namespace frontlab;
    CLI::App app{"Bistable front propagation experiments"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    for (const auto& name : experiment_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", config_path, "JSON run configuration (defaults apply when omitted)");
        sub->add_option("--out", out_dir, "output directory (overrides outputs.directory)");
        sub->add_option("--seed", seed, "seed for randomized checks (overrides seed)");
    }
    if (argc > 1 && argv[1][0] != '-') {
        const auto& names = experiment_names();
        if (std::find(names.begin(), names.end(), argv[1]) == names.end()) {
            std::string known;
            for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
            std::cerr << "frontlab: UnknownExperiment: '" << argv[1] << "' is not one of: " << known << '\n';
            return 2;
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    const std::string name = app.get_subcommands().front()->get_name();

    try {
        RunConfig cfg = config_path.empty() ? parse_config(json::object()) : read_config(config_path);
        if (seed) cfg.seed = *seed;
        if (!out_dir.empty()) cfg.outputs.directory = out_dir;
        const LoadedConfig lc = validate_config(cfg);
        const auto rec = run_experiment(lc, name, lc.config.outputs.directory);
        std::cout << to_json_text(to_json(rec));
        return rec.pass ? 0 : 4;
    } catch (const Error& e) {
        std::cerr << "frontlab: " << e.what() << '\n';
        return e.is_numerical() ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "frontlab: " << e.what() << '\n';
        return 3;
    }
}
