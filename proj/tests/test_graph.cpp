#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "dynrgg/graph.hpp"
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

// BFS over the distance matrix; label = minimal member of the component
std::vector<std::int32_t> bfs_partition(const std::vector<Point>& pts, double r) {
    const std::int32_t n = static_cast<std::int32_t>(pts.size());
    std::vector<std::int32_t> label(n, -1), queue;
    for (std::int32_t i = 0; i < n; ++i) {
        if (label[i] >= 0) continue;
        label[i] = i;
        queue.assign(1, i);
        while (!queue.empty()) {
            const std::int32_t u = queue.back();
            queue.pop_back();
            for (std::int32_t v = 0; v < n; ++v) {
                if (label[v] < 0 && torus_distance(pts[u], pts[v]) <= r) {
                    label[v] = i;
                    queue.push_back(v);
                }
            }
        }
    }
    return label;
}

std::vector<std::int32_t> canonical_labels(const ComponentLabeling& lab) {
    std::map<std::int32_t, std::int32_t> min_member;
    for (std::int32_t v = 0; v < static_cast<std::int32_t>(lab.root.size()); ++v) {
        auto [it, fresh] = min_member.try_emplace(lab.root[v], v);
        if (!fresh) it->second = std::min(it->second, v);
    }
    std::vector<std::int32_t> out(lab.root.size());
    for (std::size_t v = 0; v < lab.root.size(); ++v) out[v] = min_member.at(lab.root[v]);
    return out;
}

} // namespace

TEST_CASE("build_rgg on the three-point instance") {
    const std::vector<Point> pts{{0.0, 0.0}, {0.05, 0.0}, {0.5, 0.5}};
    const Graph g = build_rgg(pts, 0.1);
    CHECK(g.adjacency[0] == std::vector<std::int32_t>{1});
    CHECK(g.adjacency[1] == std::vector<std::int32_t>{0});
    CHECK(g.adjacency[2].empty());

    const Graph single = build_rgg({{0.3, 0.3}}, 0.2);
    CHECK(single.n == 1);
    CHECK(single.adjacency[0].empty());
}

TEST_CASE("grid-backed build matches the all-pairs reference") {
    SplitMix64 rng(21);
    for (int inst = 0; inst < 40; ++inst) {
        const std::int64_t n = 2 + static_cast<std::int64_t>(rng.next_u64() % 199);
        const double r = 0.003 + 0.447 * rng.next_double();
        const auto pts = random_points(n, rng);
        REQUIRE(build_rgg(pts, r).adjacency == build_rgg_bruteforce(pts, r).adjacency);
    }
}

TEST_CASE("connected_components on hand-built instances") {
    // path of three points along x, spacing 0.08 <= r
    const std::vector<Point> path{{0.1, 0.5}, {0.18, 0.5}, {0.26, 0.5}};
    const ComponentLabeling lab = connected_components(build_rgg(path, 0.1));
    CHECK(lab.component_count == 1);
    CHECK(lab.sizes.size() == 1);
    CHECK(lab.sizes.begin()->second == 3);
    CHECK(is_connected(lab));

    const std::vector<Point> pts{{0.0, 0.0}, {0.05, 0.0}, {0.5, 0.5}};
    const ComponentLabeling lab2 = connected_components(build_rgg(pts, 0.1));
    CHECK(lab2.component_count == 2);
    CHECK(!is_connected(lab2));
    CHECK(lab2.root[0] == lab2.root[1]);
    CHECK(lab2.root[0] != lab2.root[2]);
    CHECK(count_isolated(lab2) == 1);
    CHECK(isolated_vertices(lab2) == std::vector<std::int32_t>{2});

    // empty graph counts as connected
    const ComponentLabeling lab3 = connected_components(build_rgg({}, 0.1));
    CHECK(lab3.component_count == 0);
    CHECK(is_connected(lab3));

    // no edges at all: seven isolated vertices
    std::vector<Point> spread;
    for (int i = 0; i < 7; ++i) spread.push_back({0.14 * i, 0.5 * (i % 2)});
    const ComponentLabeling lab4 = connected_components(build_rgg(spread, 0.01));
    CHECK(lab4.component_count == 7);
    CHECK(count_isolated(lab4) == 7);

    // tight cluster: complete graph, nothing isolated
    std::vector<Point> cluster;
    for (int i = 0; i < 5; ++i) cluster.push_back({0.5 + 0.001 * i, 0.5});
    CHECK(count_isolated(connected_components(build_rgg(cluster, 0.1))) == 0);
}

TEST_CASE("union-find partition equals BFS partition") {
    SplitMix64 rng(22);
    for (int inst = 0; inst < 100; ++inst) {
        const std::int64_t n = 2 + static_cast<std::int64_t>(rng.next_u64() % 299);
        const double r = 0.003 + 0.447 * rng.next_double();
        const auto pts = random_points(n, rng);
        const ComponentLabeling lab = connected_components(build_rgg(pts, r));
        REQUIRE(canonical_labels(lab) == bfs_partition(pts, r));

        std::int64_t total = 0;
        for (const auto& [root, size] : lab.sizes) total += size;
        REQUIRE(total == n);
    }
}

TEST_CASE("adding radius never splits components") {
    SplitMix64 rng(23);
    for (int inst = 0; inst < 30; ++inst) {
        const auto pts = random_points(150, rng);
        const double r1 = 0.01 + 0.2 * rng.next_double();
        const double r2 = r1 + 0.2 * rng.next_double();
        const ComponentLabeling lab1 = connected_components(build_rgg(pts, r1));
        const ComponentLabeling lab2 = connected_components(build_rgg(pts, r2));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                if (lab1.root[i] == lab1.root[j]) REQUIRE(lab2.root[i] == lab2.root[j]);
            }
        }
    }
}

TEST_CASE("unwrap_component lays out a wrap-joined pair in the plane") {
    const std::vector<Point> pts{{0.98, 0.5}, {0.02, 0.5}};
    const Graph g = build_rgg(pts, 0.1);
    const UnwrapResult uw = unwrap_component(pts, g, {0, 1});
    CHECK(!uw.wraps);
    CHECK(uw.coords[0].x == doctest::Approx(0.98));
    CHECK(uw.coords[1].x == doctest::Approx(1.02));
    CHECK(uw.coords[0].y == doctest::Approx(0.5));
    CHECK(uw.coords[1].y == doctest::Approx(0.5));
}

TEST_CASE("unwrap_component is the identity on a non-wrapping component") {
    const std::vector<Point> pts{{0.4, 0.4}, {0.45, 0.42}, {0.5, 0.44}};
    const Graph g = build_rgg(pts, 0.08);
    const UnwrapResult uw = unwrap_component(pts, g, {0, 1, 2});
    CHECK(!uw.wraps);
    for (int i = 0; i < 3; ++i) {
        CHECK(uw.coords[i].x == doctest::Approx(pts[i].x).epsilon(1e-15));
        CHECK(uw.coords[i].y == doctest::Approx(pts[i].y).epsilon(1e-15));
    }
}

TEST_CASE("a ring spanning the torus is flagged as wrapping") {
    const double r = 0.15;
    const int k = static_cast<int>(std::ceil(1.0 / r)) + 1; // spacing 1/k <= r
    std::vector<Point> ring;
    std::vector<std::int32_t> members;
    for (int i = 0; i < k; ++i) {
        ring.push_back({static_cast<double>(i) / k, 0.5});
        members.push_back(i);
    }
    const Graph g = build_rgg(ring, r);
    const UnwrapResult uw = unwrap_component(ring, g, members);
    CHECK(uw.wraps);

    const ComponentLabeling lab = connected_components(g);
    const CensusReport census = component_census(ring, g, lab, 0.25, 4);
    CHECK(census.non_embeddable_count == 1);
}

TEST_CASE("census counts the close pair by epsilon") {
    const double r = 0.1;
    const std::vector<Point> pts{{0.5, 0.5}, {0.5 + 0.05 * r, 0.5}, {0.1, 0.1}};
    const Graph g = build_rgg(pts, r);
    const ComponentLabeling lab = connected_components(g);

    const CensusReport wide = component_census(pts, g, lab, 0.1, 4);
    CHECK(wide.k_ell.at(2) == 1);
    CHECK(wide.k_prime.at(2) == 1);
    CHECK(wide.k1 == 1);

    const CensusReport narrow = component_census(pts, g, lab, 0.01, 4);
    CHECK(narrow.k_ell.at(2) == 1);
    CHECK(narrow.k_prime.at(2) == 0);

    CHECK_THROWS_AS(component_census(pts, g, lab, 0.5, 4), std::invalid_argument);
    CHECK_THROWS_AS(component_census(pts, g, lab, 0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(component_census(pts, g, lab, -0.1, 4), std::invalid_argument);
    CHECK_THROWS_AS(component_census(pts, g, lab, 0.25, 1), std::invalid_argument);
}

TEST_CASE("census invariants on random instances") {
    SplitMix64 rng(24);
    for (int inst = 0; inst < 60; ++inst) {
        const std::int64_t n = 5 + static_cast<std::int64_t>(rng.next_u64() % 296);
        const double r = 0.01 + 0.3 * rng.next_double();
        const double eps = 0.05 + 0.4 * rng.next_double();
        const int ell_max = 2 + static_cast<int>(rng.next_u64() % 5);
        const auto pts = random_points(n, rng);
        const Graph g = build_rgg(pts, r);
        const ComponentLabeling lab = connected_components(g);
        const CensusReport census = component_census(pts, g, lab, eps, ell_max);

        REQUIRE(census.k1 == census.k_ell.at(1));
        REQUIRE(census.k1 == count_isolated(lab));
        std::int64_t size_total = 0;
        for (const auto& [size, count] : census.k_ell) size_total += std::int64_t{size} * count;
        REQUIRE(size_total == n);

        for (int l = 1; l <= ell_max; ++l) {
            REQUIRE(census.k_prime.at(l) <= census.k_ell.at(l));
            REQUIRE(census.k_tilde.at(l) >= census.k_ell.at(l) - 1);
            // largest-excluded tail sum identity
            int tail = 0;
            for (const auto& [size, count] : census.k_ell) {
                if (size >= l) tail += count;
            }
            if (census.largest_size >= l) --tail;
            REQUIRE(census.k_tilde.at(l) == tail);
        }
    }
}
