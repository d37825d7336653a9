// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include "criteria.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <vector>

int main(int argc, char** argv) {
    CLI::App app{"spinent acceptance criteria"};
    spinent::verify::Options opts;
    std::vector<int> only;
    app.add_option("--only", only, "Criterion ids to run (default: all)")->delimiter(',');
    app.add_option("--seed", opts.seed, "Seed for the randomized criteria");
    app.add_option("--jobs", opts.jobs, "Worker threads")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    int failures = 0;
    for (const auto& r : spinent::verify::run_criteria(opts, only)) {
        std::printf("%s\n", spinent::verify::format_result(r).c_str());
        if (!r.passed) ++failures;
    }
    std::fflush(stdout);
    return failures == 0 ? 0 : 1;
}
