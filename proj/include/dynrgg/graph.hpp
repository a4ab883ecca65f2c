#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "dynrgg/geometry.hpp"

namespace dynrgg {

/// Random geometric graph snapshot: vertices are point indices, an edge
/// joins i,j iff torus_distance(points[i], points[j]) <= r. Adjacency lists
/// are sorted ascending; no self-loops.
struct Graph {
    std::int32_t n{0};
    double r{0.0};
    std::vector<std::vector<std::int32_t>> adjacency;
};

/// Grid-backed construction, OpenMP-parallel over vertices. Ties at exactly
/// r count as edges.
Graph build_rgg(const std::vector<Point>& points, double r);

/// Serial all-pairs reference. Same contract as build_rgg; kept as the
/// oracle for tests and the baseline for the benchmark.
Graph build_rgg_bruteforce(const std::vector<Point>& points, double r);

/// Union-find labeling of a snapshot. root[i] is the representative of i's
/// component; sizes maps each representative to its component size.
struct ComponentLabeling {
    std::vector<std::int32_t> root;
    std::map<std::int32_t, std::int32_t> sizes;
    std::int32_t component_count{0};
};

/// Path compression + union by size, edges processed in sorted order so the
/// representatives are deterministic.
ComponentLabeling connected_components(const Graph& g);

/// component_count <= 1 (the empty graph counts as connected).
bool is_connected(const ComponentLabeling& labeling);

/// Number of size-1 components.
std::int32_t count_isolated(const ComponentLabeling& labeling);

/// Indices of size-1 components, ascending.
std::vector<std::int32_t> isolated_vertices(const ComponentLabeling& labeling);

/// Planar unwrapping of one connected component. BFS from the lowest-index
/// member places each vertex at its parent plus the per-axis minimal-image
/// offset (in (-1/2, 1/2]), starting from the first member's torus
/// coordinates. `wraps` is set if the component cannot be laid out in the
/// plane: some non-tree edge closes a cycle winding around the torus, or the
/// bounding box exceeds 1 on an axis. coords follow the order of `members`
/// and are meaningful only when !wraps.
struct UnwrapResult {
    bool wraps{false};
    std::vector<Point> coords;
};

UnwrapResult unwrap_component(const std::vector<Point>& points, const Graph& g,
                              const std::vector<std::int32_t>& members);

/// Per-snapshot component census.
///   k1       isolated vertex count
///   k_ell    component-size histogram (size -> count), keys 1..ell_max
///            always present plus any larger observed sizes
///   k_prime  size -> count of components whose members all lie within
///            epsilon*r (torus distance) of their leftmost vertex; leftmost
///            is the member with minimal unwrapped x (ties: y, then index).
///            Keys 1..ell_max.
///   k_tilde  size -> count of non-largest components of size >= that key
///            (largest component excluded, ties broken by smallest minimal
///            vertex index). Keys 1..ell_max.
///   A component is embeddable iff it unwraps without wrapping and its
///   bounding box fits in a square of side 1-2r.
struct CensusReport {
    std::int32_t k1{0};
    std::map<int, int> k_ell;
    std::map<int, int> k_prime;
    std::map<int, int> k_tilde;
    std::int32_t largest_size{0};
    double epsilon{0.0};
    std::int32_t non_embeddable_count{0};
};

/// Throws std::invalid_argument unless 0 < epsilon < 1/2 and ell_max >= 2.
CensusReport component_census(const std::vector<Point>& points, const Graph& g,
                              const ComponentLabeling& labeling, double epsilon,
                              int ell_max);

/// Light per-step extraction for long traces: isolated vertex set plus
/// connectivity, straight from the cell grid with no adjacency storage.
/// Equality with the Graph-based route is covered by tests.
struct SnapshotScratch {
    std::vector<std::int32_t> parent;
    std::vector<std::int32_t> size;
    std::vector<char> nonisolated;
};

struct SnapshotStats {
    std::vector<std::int32_t> isolated; // ascending
    std::int32_t component_count{0};
    bool connected{true};
};

void snapshot_stats(const std::vector<Point>& points, double r,
                    SnapshotScratch& scratch, SnapshotStats& out);

} // namespace dynrgg
