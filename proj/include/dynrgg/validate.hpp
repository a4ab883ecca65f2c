#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dynrgg {

struct CriterionResult {
    int id{0};
    std::string name;
    bool passed{false};
    std::string details;
    std::map<std::string, double> metrics;
};

/// quick scales trial counts and trace lengths down ~10x for development
/// runs; verdicts at full scale are the acceptance configuration.
/// tolerances overrides the headline tolerance of a criterion by key
/// ("c1".."c11"); an override of 0 forces the failure path.
struct ValidationOptions {
    std::uint64_t seed{42};
    bool quick{false};
    std::map<std::string, double> tolerances;
    std::vector<int> only; // empty = all criteria
};

struct ValidationReport {
    std::vector<CriterionResult> criteria;
    bool all_passed{false};
};

/// Run the acceptance criteria (1..11, or the `only` subset). Expensive
/// shared artifacts (static batches, long traces) are computed once and
/// reused across criteria.
ValidationReport run_validation(const ValidationOptions& options);

std::string to_json_text(const ValidationReport& report, const ValidationOptions& options);

} // namespace dynrgg
