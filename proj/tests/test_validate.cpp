#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "dynrgg/validate.hpp"

using namespace dynrgg;

TEST_CASE("only-filter selects criteria in order") {
    ValidationOptions opts;
    opts.quick = true;
    opts.only = {10, 4};
    const ValidationReport rep = run_validation(opts);
    REQUIRE(rep.criteria.size() == 2);
    CHECK(rep.criteria[0].id == 4);
    CHECK(rep.criteria[1].id == 10);
    CHECK(rep.criteria[0].passed);
    CHECK(rep.criteria[1].passed);
    CHECK(rep.all_passed);
    for (const CriterionResult& c : rep.criteria) {
        CHECK(c.details.find("[quick scale]") != std::string::npos);
    }
}

TEST_CASE("a zero tolerance forces the failure path") {
    ValidationOptions opts;
    opts.quick = true;
    opts.only = {4};
    opts.tolerances["c4"] = 0.0;
    const ValidationReport rep = run_validation(opts);
    REQUIRE(rep.criteria.size() == 1);
    CHECK(!rep.criteria[0].passed);
    CHECK(!rep.all_passed);
    CHECK(!rep.criteria[0].details.empty());
}

TEST_CASE("exact-oracle verdicts are stable across master seeds") {
    for (std::uint64_t seed : {1ull, 7ull, 42ull, 1234ull, 987654321ull}) {
        ValidationOptions opts;
        opts.seed = seed;
        opts.quick = true;
        opts.only = {10};
        const ValidationReport rep = run_validation(opts);
        REQUIRE(rep.criteria.size() == 1);
        CHECK(rep.criteria[0].passed);
    }
}

TEST_CASE("verdict JSON carries per-criterion entries") {
    ValidationOptions opts;
    opts.quick = true;
    opts.only = {10};
    const ValidationReport rep = run_validation(opts);
    const std::string json = to_json_text(rep, opts);
    CHECK(json.find("\"all_passed\"") != std::string::npos);
    CHECK(json.find("\"criteria\"") != std::string::npos);
    CHECK(json.find("\"oracle_equivalences\"") != std::string::npos);
    CHECK(json.find("\"metrics\"") != std::string::npos);
    CHECK(json.find("\"quick\": true") != std::string::npos);
}
