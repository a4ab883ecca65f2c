// Acceptance suite: runs every criterion at full scale and prints one
// pass/fail line per criterion. Nonzero exit when any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "dynrgg/validate.hpp"

int main(int argc, char** argv) {
    dynrgg::ValidationOptions opts;
    opts.seed = 42;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) opts.quick = true;
        if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
            opts.seed = std::strtoull(argv[++i], nullptr, 10);
        }
    }

    const dynrgg::ValidationReport report = dynrgg::run_validation(opts);
    for (const dynrgg::CriterionResult& c : report.criteria) {
        std::printf("%s criterion %2d %-32s %s\n", c.passed ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), c.details.c_str());
    }
    std::printf("%s\n", report.all_passed ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED");
    return report.all_passed ? 0 : 1;
}
