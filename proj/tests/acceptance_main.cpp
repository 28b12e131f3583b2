// Acceptance suite: one PASS/FAIL line per criterion, exit code 0 iff all pass.
// Optional arguments restrict the run to the listed criterion ids.
#include "frontlab/harness/acceptance.hpp"

#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
    frontlab::AcceptanceOptions opt;
    for (int k = 1; k < argc; ++k) opt.only.insert(std::atoi(argv[k]));
    const auto rep = frontlab::run_acceptance(opt, [](const frontlab::CriterionResult& r) {
        std::printf("%s criterion %2d (%s): %s [%.1f s]\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.detail.c_str(), r.seconds);
        std::fflush(stdout);
    });
    std::printf("%s: %zu criteria\n", rep.pass ? "ALL PASS" : "FAILURES", rep.criteria.size());
    return rep.pass ? 0 : 1;
}
