#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "dynrgg/rng.hpp"
#include "dynrgg/stats.hpp"

using namespace dynrgg;

namespace {

// Poisson draw by inversion of the product of uniforms
std::int64_t poisson_draw(double lambda, SplitMix64& rng) {
    const double limit = std::exp(-lambda);
    double prod = 1.0;
    std::int64_t k = -1;
    do {
        prod *= rng.next_double();
        ++k;
    } while (prod > limit);
    return k;
}

} // namespace

TEST_CASE("classify_transition set algebra") {
    const TransitionStats t = classify_transition({1, 2}, {2, 3});
    CHECK(t.b == 1);
    CHECK(t.d == 1);
    CHECK(t.s_count == 1);
    CHECK(t.k1_before == 2);
    CHECK(t.k1_after == 2);

    const TransitionStats empty = classify_transition({}, {});
    CHECK(empty.b == 0);
    CHECK(empty.d == 0);
    CHECK(empty.s_count == 0);

    SplitMix64 rng(41);
    for (int it = 0; it < 500; ++it) {
        std::vector<std::int32_t> before, after;
        for (std::int32_t v = 0; v < 60; ++v) {
            const std::uint64_t bits = rng.next_u64();
            if (bits & 1) before.push_back(v);
            if (bits & 2) after.push_back(v);
        }
        const TransitionStats ts = classify_transition(before, after);
        CHECK(ts.k1_before == ts.d + ts.s_count);
        CHECK(ts.k1_after == ts.s_count + ts.b);
    }
}

TEST_CASE("record_connectivity run-length encoding") {
    const std::vector<std::uint8_t> seq{1, 1, 0, 1};
    const auto runs = record_connectivity(seq);
    REQUIRE(runs.size() == 3);
    CHECK(runs[0].kind == Connectivity::connected);
    CHECK(runs[0].length == 2);
    CHECK(!runs[0].complete);
    CHECK(runs[1].kind == Connectivity::disconnected);
    CHECK(runs[1].length == 1);
    CHECK(runs[1].complete);
    CHECK(runs[1].start_step == 2);
    CHECK(runs[2].length == 1);
    CHECK(!runs[2].complete);

    const auto single = record_connectivity(std::vector<std::uint8_t>(9, 1));
    REQUIRE(single.size() == 1);
    CHECK(single[0].length == 9);
    CHECK(!single[0].complete);

    // alternating sequence of length 11: nine complete unit runs
    std::vector<std::uint8_t> alt;
    for (int i = 0; i < 11; ++i) alt.push_back(i % 2 == 0 ? 1 : 0);
    const auto alt_runs = record_connectivity(alt);
    REQUIRE(alt_runs.size() == 11);
    int complete = 0;
    std::int64_t total = 0;
    for (const PeriodRecord& p : alt_runs) {
        complete += p.complete ? 1 : 0;
        total += p.length;
        CHECK(p.length == 1);
    }
    CHECK(complete == 9);
    CHECK(total == 11);

    CHECK_THROWS_AS(record_connectivity({}), std::invalid_argument);
}

TEST_CASE("period lengths always sum to the observation window") {
    SplitMix64 rng(42);
    for (int it = 0; it < 200; ++it) {
        const std::size_t len = 1 + rng.next_u64() % 400;
        std::vector<std::uint8_t> seq(len);
        for (std::uint8_t& v : seq) v = rng.next_u64() & 1;
        std::int64_t total = 0;
        for (const PeriodRecord& p : record_connectivity(seq)) total += p.length;
        CHECK(total == static_cast<std::int64_t>(len));
    }
}

TEST_CASE("aggregate merge is exact on integer data") {
    SplitMix64 rng(43);
    Aggregate whole, a, b, c;
    for (int i = 0; i < 3000; ++i) {
        const std::int64_t v = static_cast<std::int64_t>(rng.next_u64() % 1000);
        whole.add(v);
        (i % 3 == 0 ? a : i % 3 == 1 ? b : c).add(v);
    }
    Aggregate merged = a;
    merged.merge(b);
    merged.merge(c);
    CHECK(merged.count == whole.count);
    CHECK(merged.sum == whole.sum);
    CHECK(merged.sum_of_squares == whole.sum_of_squares);
    CHECK(merged.histogram == whole.histogram);

    // commutes
    Aggregate swapped = c;
    swapped.merge(a);
    swapped.merge(b);
    CHECK(swapped.sum == merged.sum);
    CHECK(swapped.histogram == merged.histogram);
}

TEST_CASE("mean_ci formulas") {
    Aggregate ones;
    for (int i = 0; i < 4; ++i) ones.add(1);
    const auto ci = mean_ci(ones);
    REQUIRE(ci.has_value());
    CHECK(ci->mean == 1.0);
    CHECK(ci->half_width == 0.0);

    Aggregate two;
    two.add(0);
    two.add(2);
    const auto ci2 = mean_ci(two);
    REQUIRE(ci2.has_value());
    CHECK(ci2->mean == 1.0);
    CHECK(ci2->half_width == doctest::Approx(1.96).epsilon(1e-12));

    Aggregate one;
    one.add(5);
    CHECK(!mean_ci(one).has_value());
}

TEST_CASE("poisson_fit accepts a true Poisson sample") {
    SplitMix64 rng(44);
    std::map<std::int64_t, std::uint64_t> hist;
    for (int i = 0; i < 100000; ++i) ++hist[poisson_draw(1.0, rng)];
    const PoissonFit fit = poisson_fit(hist, 1.0);
    REQUIRE(fit.valid);
    CHECK(std::fabs(fit.empirical_mean - 1.0) < 0.02);
    CHECK(fit.mean_ratio == doctest::Approx(fit.empirical_mean));
    CHECK(fit.var_mean_ratio == doctest::Approx(1.0).epsilon(0.05));
    CHECK(fit.p_value > 0.01);
}

TEST_CASE("poisson_fit rejects a point mass and flags small samples") {
    std::map<std::int64_t, std::uint64_t> mass{{0, 1000}};
    const PoissonFit fit = poisson_fit(mass, 1.0);
    REQUIRE(fit.valid);
    CHECK(fit.p_value < 1e-6);

    CHECK(!poisson_fit({}, 1.0).valid);
    CHECK(!poisson_fit({{0, 499}}, 1.0).valid);
    CHECK(poisson_fit({{0, 250}, {1, 250}}, 1.0).valid);
    CHECK_THROWS_AS(poisson_fit(mass, 0.0), std::invalid_argument);
}

TEST_CASE("chi-squared tail against reference values") {
    CHECK(chi_square_tail(11.344867, 3) == doctest::Approx(0.0099999987528).epsilon(1e-7));
    CHECK(chi_square_tail(7.8147279, 3) == doctest::Approx(0.05).epsilon(1e-7));
    CHECK(chi_square_tail(0.5, 3) == doctest::Approx(0.918891411655).epsilon(1e-9));
    CHECK(chi_square_tail(25.0, 9) == doctest::Approx(0.00297118048592).epsilon(1e-9));
    CHECK(chi_square_tail(118.498, 99) == doctest::Approx(0.088416990457).epsilon(1e-8));
    CHECK(chi_square_tail(0.0, 5) == 1.0);
    CHECK_THROWS_AS(chi_square_tail(1.0, 0), std::invalid_argument);
}

TEST_CASE("KS uniformity test behaves on uniform and shifted samples") {
    SplitMix64 rng(45);
    std::vector<double> uniform;
    for (int i = 0; i < 10000; ++i) uniform.push_back(rng.next_double());
    CHECK(ks_uniform(uniform).p_value > 0.01);

    std::vector<double> squeezed;
    for (double v : uniform) squeezed.push_back(v * 0.5);
    CHECK(ks_uniform(squeezed).p_value < 1e-6);

    CHECK_THROWS_AS(ks_uniform({}), std::invalid_argument);
}

TEST_CASE("grid chi-square uniformity") {
    SplitMix64 rng(46);
    std::vector<Point> pts;
    for (int i = 0; i < 20000; ++i) pts.push_back({rng.next_double(), rng.next_double()});
    CHECK(chi_square_uniform_grid(pts, 10).p_value > 0.01);

    std::vector<Point> corner;
    for (int i = 0; i < 20000; ++i) {
        corner.push_back({0.3 * rng.next_double(), 0.3 * rng.next_double()});
    }
    CHECK(chi_square_uniform_grid(corner, 10).p_value < 1e-12);

    CHECK_THROWS_AS(chi_square_uniform_grid(pts, 1), std::invalid_argument);
    std::vector<Point> few{{0.1, 0.2}, {0.3, 0.4}};
    CHECK_THROWS_AS(chi_square_uniform_grid(few, 10), std::invalid_argument);
}
