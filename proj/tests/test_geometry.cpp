#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dynrgg/geometry.hpp"
#include "dynrgg/rng.hpp"

using namespace dynrgg;

namespace {

std::vector<Point> random_points(std::int64_t n, SplitMix64& rng) {
    std::vector<Point> pts(static_cast<std::size_t>(n));
    for (Point& p : pts) {
        p.x = rng.next_double();
        p.y = rng.next_double();
    }
    return pts;
}

// all-pairs scan, the oracle for neighbor queries
std::vector<std::int32_t> brute_neighbors(const std::vector<Point>& pts, std::int32_t i,
                                          double r) {
    std::vector<std::int32_t> out;
    for (std::int32_t j = 0; j < static_cast<std::int32_t>(pts.size()); ++j) {
        if (j != i && torus_distance(pts[i], pts[j]) <= r) out.push_back(j);
    }
    return out;
}

} // namespace

TEST_CASE("wrap canonicalizes into [0,1)") {
    CHECK(wrap(1.25) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(wrap(-0.1) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(wrap(0.0) == 0.0);
    CHECK(wrap(-0.0) == 0.0);
    CHECK(wrap(3.0) == 0.0);
    CHECK(wrap(-2.0) == 0.0);
    // fractional parts that round up to 1.0 must still land inside [0,1)
    CHECK(wrap(-1e-20) < 1.0);
    CHECK(wrap(-1e-20) >= 0.0);
    CHECK(wrap(7.25) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK_THROWS_AS(wrap(std::numeric_limits<double>::infinity()), std::invalid_argument);
    CHECK_THROWS_AS(wrap(std::nan("")), std::invalid_argument);
}

TEST_CASE("min_image_offset picks the representative in (-1/2, 1/2]") {
    CHECK(min_image_offset(0.3) == doctest::Approx(0.3));
    CHECK(min_image_offset(0.7) == doctest::Approx(-0.3));
    CHECK(min_image_offset(-0.7) == doctest::Approx(0.3));
    CHECK(min_image_offset(0.5) == 0.5);
    CHECK(min_image_offset(-0.5) == 0.5);
    CHECK(min_image_offset(0.0) == 0.0);
}

TEST_CASE("torus distance wraps on each axis") {
    CHECK(torus_distance({0.95, 0.5}, {0.05, 0.5}) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(torus_distance({0.1, 0.1}, {0.9, 0.9}) ==
          doctest::Approx(std::sqrt(0.08)).epsilon(1e-12));
    CHECK(torus_distance({0.37, 0.81}, {0.37, 0.81}) == 0.0);
}

TEST_CASE("torus distance is a metric on random triples") {
    SplitMix64 rng(11);
    for (int it = 0; it < 2000; ++it) {
        const Point a{rng.next_double(), rng.next_double()};
        const Point b{rng.next_double(), rng.next_double()};
        const Point c{rng.next_double(), rng.next_double()};
        const double ab = torus_distance(a, b);
        CHECK(ab == torus_distance(b, a));
        CHECK(ab <= std::sqrt(2.0) / 2.0 + 1e-15);
        CHECK(ab <= torus_distance(a, c) + torus_distance(c, b) + 1e-12);
    }
}

TEST_CASE("torus distance is translation invariant") {
    SplitMix64 rng(12);
    for (int it = 0; it < 2000; ++it) {
        const Point a{rng.next_double(), rng.next_double()};
        const Point b{rng.next_double(), rng.next_double()};
        const double dx = rng.next_double(), dy = rng.next_double();
        const Point a2{wrap(a.x + dx), wrap(a.y + dy)};
        const Point b2{wrap(b.x + dx), wrap(b.y + dy)};
        CHECK(std::fabs(torus_distance(a, b) - torus_distance(a2, b2)) <= 1e-12);
    }
}

TEST_CASE("cell grid dimensions and degenerate fallback") {
    SplitMix64 rng(13);
    const auto pts = random_points(100, rng);
    const CellGrid g = build_cell_grid(pts, 0.1);
    CHECK(g.cells_per_axis() == 10);
    CHECK(!g.all_pairs());
    CHECK(g.cells_per_axis() == static_cast<int>(std::llround(1.0 / g.cell_side())));
    CHECK(g.cells_per_axis() * g.cell_side() <= 1.0 + 1e-15);

    const CellGrid coarse = build_cell_grid(pts, 0.4); // floor(1/0.4) = 2 < 3
    CHECK(coarse.all_pairs());

    const CellGrid empty = build_cell_grid({}, 0.1);
    CHECK(empty.point_count() == 0);

    CHECK_THROWS_AS(build_cell_grid(pts, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_cell_grid(pts, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_cell_grid({{1.5, 0.5}}, 0.1), std::invalid_argument);
}

TEST_CASE("neighbors_within on the three-point instance") {
    const std::vector<Point> pts{{0.0, 0.0}, {0.05, 0.0}, {0.5, 0.5}};
    const CellGrid g = build_cell_grid(pts, 0.1);
    CHECK(neighbors_within(g, pts, 0, 0.1) == std::vector<std::int32_t>{1});
    CHECK(neighbors_within(g, pts, 2, 0.1).empty());
    CHECK_THROWS_AS(neighbors_within(g, pts, 3, 0.1), std::out_of_range);
    CHECK_THROWS_AS(neighbors_within(g, pts, -1, 0.1), std::out_of_range);
}

TEST_CASE("neighbors_within equals the all-pairs scan on random instances") {
    SplitMix64 rng(14);
    for (int inst = 0; inst < 150; ++inst) {
        const std::int64_t n = 2 + static_cast<std::int64_t>(rng.next_u64() % 299);
        const double r = 0.003 + 0.447 * rng.next_double();
        const auto pts = random_points(n, rng);
        const CellGrid g = build_cell_grid(pts, r);
        for (std::int32_t i = 0; i < static_cast<std::int32_t>(n); ++i) {
            REQUIRE(neighbors_within(g, pts, i, r) == brute_neighbors(pts, i, r));
        }
    }
}

TEST_CASE("distance ties at exactly r count as neighbors") {
    const std::vector<Point> pts{{0.2, 0.5}, {0.3, 0.5}};
    const double r = torus_distance(pts[0], pts[1]);
    const CellGrid g = build_cell_grid(pts, r);
    CHECK(neighbors_within(g, pts, 0, r) == std::vector<std::int32_t>{1});
}
