// Acceptance checks shared by `spinent verify` and the acceptance test binary.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spinent::verify {

struct Options {
    std::uint64_t seed = 20240607;
    int jobs = 1;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    std::optional<double> budget_seconds;
};

struct Criterion {
    int id;
    const char* title;
    std::optional<double> budget_seconds;
    // Returns an empty string on success, otherwise the first failure found.
    std::string (*check)(const Options&);
};

const std::vector<Criterion>& criteria();

/// Runs one criterion; a check that throws counts as a failure. The runtime
/// budget is part of the verdict.
CriterionResult run_criterion(const Criterion& c, const Options& opts);

/// Runs the criteria whose ids are in `only` (all when empty), in id order.
std::vector<CriterionResult> run_criteria(const Options& opts, std::span<const int> only = {});

/// "PASS  3  Odd-ring ground state ...  (0.02 s, budget 1 s)" plus ": detail" on failure.
std::string format_result(const CriterionResult& r);

}  // namespace spinent::verify
