#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace hawkes::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double budget_seconds = 0.0;  // 0: no runtime budget
};

struct SuiteOptions {
    unsigned workers = 0;            // simulation workers, 0: hardware concurrency
    std::uint64_t seed = 20240611;   // Monte-Carlo seed
    std::set<int> only;              // empty: all criteria
};

inline constexpr int criterion_count = 9;

std::string criterion_name(int id);

CriterionResult run_criterion(int id, const SuiteOptions& options);

// Runs the selected criteria in order, printing one line per criterion as it finishes.
std::vector<CriterionResult> run_suite(const SuiteOptions& options, std::ostream& out);

// "PASS [3] subcritical limit: ... (0.12 s)"
std::string format_result(const CriterionResult& r);

} // namespace hawkes::acceptance
