#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace santalo {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    bool skipped = false;  // not part of the quick subset
    std::string detail;    // measured values, deterministic for a fixed seed
    double seconds = 0.0;  // wall time, kept out of the report text
};

struct AcceptanceOptions {
    bool quick = false;
    std::uint64_t seed = 20240917;
    std::vector<int> only;  // empty: every criterion
};

/// Criteria 1-13. Criterion 14 (timing of the whole suite and rerun
/// determinism) is judged by the caller from these results.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

/// One line per criterion; contains no timings, so reruns with one seed are
/// byte-identical.
std::string acceptance_report(const std::vector<CriterionResult>& results, const AcceptanceOptions& opt);

/// Runtime limits from the criteria text (0 when none).
double criterion_time_limit(int id);

}  // namespace santalo
