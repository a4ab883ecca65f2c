#include "dynrgg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace dynrgg {

namespace {

struct UnionFind {
    std::vector<std::int32_t> parent;
    std::vector<std::int32_t> size;

    explicit UnionFind(std::int32_t n) : parent(n), size(n, 1) {
        for (std::int32_t i = 0; i < n; ++i) parent[i] = i;
    }

    std::int32_t find(std::int32_t v) {
        std::int32_t root = v;
        while (parent[root] != root) root = parent[root];
        while (parent[v] != root) {
            std::int32_t next = parent[v];
            parent[v] = root;
            v = next;
        }
        return root;
    }

    // returns true if a merge happened
    bool unite(std::int32_t a, std::int32_t b) {
        std::int32_t ra = find(a), rb = find(b);
        if (ra == rb) return false;
        if (size[ra] < size[rb]) std::swap(ra, rb);
        parent[rb] = ra;
        size[ra] += size[rb];
        return true;
    }
};

} // namespace

Graph build_rgg(const std::vector<Point>& points, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("build_rgg: r must be positive");
    Graph g;
    g.n = static_cast<std::int32_t>(points.size());
    g.r = r;
    g.adjacency.resize(points.size());
    if (points.empty()) return g;

    const CellGrid grid = build_cell_grid(points, r);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int32_t i = 0; i < g.n; ++i) {
        neighbors_within_into(grid, points, i, r, g.adjacency[i]);
    }
    return g;
}

Graph build_rgg_bruteforce(const std::vector<Point>& points, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("build_rgg: r must be positive");
    Graph g;
    g.n = static_cast<std::int32_t>(points.size());
    g.r = r;
    g.adjacency.resize(points.size());
    const double r2 = r * r;
    for (std::int32_t i = 0; i < g.n; ++i) {
        for (std::int32_t j = i + 1; j < g.n; ++j) {
            if (torus_distance_sq(points[i], points[j]) <= r2) {
                g.adjacency[i].push_back(j);
                g.adjacency[j].push_back(i);
            }
        }
    }
    return g;
}

ComponentLabeling connected_components(const Graph& g) {
    UnionFind uf(g.n);
    std::int32_t merges = 0;
    for (std::int32_t i = 0; i < g.n; ++i) {
        for (std::int32_t j : g.adjacency[i]) {
            if (j > i && uf.unite(i, j)) ++merges;
        }
    }
    ComponentLabeling lab;
    lab.root.resize(g.n);
    for (std::int32_t i = 0; i < g.n; ++i) {
        lab.root[i] = uf.find(i);
    }
    for (std::int32_t i = 0; i < g.n; ++i) {
        if (lab.root[i] == i) lab.sizes[i] = uf.size[i];
    }
    lab.component_count = g.n - merges;
    return lab;
}

bool is_connected(const ComponentLabeling& labeling) {
    return labeling.component_count <= 1;
}

std::int32_t count_isolated(const ComponentLabeling& labeling) {
    std::int32_t k1 = 0;
    for (const auto& [root, size] : labeling.sizes) {
        if (size == 1) ++k1;
    }
    return k1;
}

std::vector<std::int32_t> isolated_vertices(const ComponentLabeling& labeling) {
    std::vector<std::int32_t> out;
    for (std::size_t i = 0; i < labeling.root.size(); ++i) {
        if (labeling.sizes.at(labeling.root[i]) == 1) {
            out.push_back(static_cast<std::int32_t>(i));
        }
    }
    return out;
}

UnwrapResult unwrap_component(const std::vector<Point>& points, const Graph& g,
                              const std::vector<std::int32_t>& members) {
    if (members.empty()) throw std::invalid_argument("unwrap_component: empty member list");

    UnwrapResult res;
    res.coords.resize(members.size());

    std::vector<std::int32_t> slot(points.size(), -1);
    for (std::size_t s = 0; s < members.size(); ++s) slot[members[s]] = static_cast<std::int32_t>(s);

    const std::int32_t start = *std::min_element(members.begin(), members.end());
    std::vector<char> placed(members.size(), 0);
    res.coords[slot[start]] = points[start];
    placed[slot[start]] = 1;

    std::queue<std::int32_t> queue;
    queue.push(start);
    while (!queue.empty()) {
        const std::int32_t u = queue.front();
        queue.pop();
        const Point pu = res.coords[slot[u]];
        for (std::int32_t v : g.adjacency[u]) {
            if (slot[v] < 0) continue; // edge leaves the member set
            const double ox = min_image_offset(points[v].x - points[u].x);
            const double oy = min_image_offset(points[v].y - points[u].y);
            if (!placed[slot[v]]) {
                res.coords[slot[v]] = Point{pu.x + ox, pu.y + oy};
                placed[slot[v]] = 1;
                queue.push(v);
            } else {
                // a non-tree edge must agree with the placement; a mismatch
                // by a whole period means the cycle winds around the torus
                const Point pv = res.coords[slot[v]];
                if (std::fabs((pv.x - pu.x) - ox) > 0.5 ||
                    std::fabs((pv.y - pu.y) - oy) > 0.5) {
                    res.wraps = true;
                }
            }
        }
    }

    for (char p : placed) {
        if (!p) throw std::invalid_argument("unwrap_component: members not connected");
    }

    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
    double min_y = min_x, max_y = -min_x;
    for (const Point& c : res.coords) {
        min_x = std::min(min_x, c.x);
        max_x = std::max(max_x, c.x);
        min_y = std::min(min_y, c.y);
        max_y = std::max(max_y, c.y);
    }
    if (max_x - min_x > 1.0 || max_y - min_y > 1.0) res.wraps = true;
    return res;
}

CensusReport component_census(const std::vector<Point>& points, const Graph& g,
                              const ComponentLabeling& labeling, double epsilon,
                              int ell_max) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw std::invalid_argument("component_census: epsilon must be in (0, 1/2)");
    }
    if (ell_max < 2) throw std::invalid_argument("component_census: ell_max must be >= 2");

    CensusReport rep;
    rep.epsilon = epsilon;
    for (int l = 1; l <= ell_max; ++l) {
        rep.k_ell[l] = 0;
        rep.k_prime[l] = 0;
        rep.k_tilde[l] = 0;
    }

    // collect members per component; scanning vertices in order makes each
    // list ascending and orders components by their minimal vertex
    std::map<std::int32_t, std::vector<std::int32_t>> by_root;
    for (std::int32_t i = 0; i < g.n; ++i) by_root[labeling.root[i]].emplace_back(i);
    std::vector<const std::vector<std::int32_t>*> comps;
    comps.reserve(by_root.size());
    {
        std::vector<std::pair<std::int32_t, const std::vector<std::int32_t>*>> ordered;
        for (const auto& [root, mem] : by_root) ordered.emplace_back(mem.front(), &mem);
        std::sort(ordered.begin(), ordered.end());
        for (const auto& [first, mem] : ordered) comps.push_back(mem);
    }

    std::size_t largest_idx = comps.size();
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const int sz = static_cast<int>(comps[c]->size());
        if (sz > rep.largest_size) {
            rep.largest_size = sz;
            largest_idx = c; // ties: earlier minimal vertex wins
        }
    }

    const double close_r = epsilon * g.r;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const std::vector<std::int32_t>& mem = *comps[c];
        const int sz = static_cast<int>(mem.size());
        ++rep.k_ell[sz];
        if (sz == 1) ++rep.k1;

        const UnwrapResult uw = unwrap_component(points, g, mem);
        bool embeddable = !uw.wraps;
        if (embeddable) {
            double min_x = uw.coords[0].x, max_x = min_x;
            double min_y = uw.coords[0].y, max_y = min_y;
            for (const Point& p : uw.coords) {
                min_x = std::min(min_x, p.x);
                max_x = std::max(max_x, p.x);
                min_y = std::min(min_y, p.y);
                max_y = std::max(max_y, p.y);
            }
            embeddable = (max_x - min_x <= 1.0 - 2.0 * g.r) &&
                         (max_y - min_y <= 1.0 - 2.0 * g.r);
        }
        if (!embeddable) ++rep.non_embeddable_count;

        if (sz <= ell_max && !uw.wraps) {
            std::size_t leftmost = 0;
            for (std::size_t s = 1; s < mem.size(); ++s) {
                const Point& a = uw.coords[s];
                const Point& b = uw.coords[leftmost];
                if (a.x < b.x || (a.x == b.x && (a.y < b.y || (a.y == b.y && mem[s] < mem[leftmost])))) {
                    leftmost = s;
                }
            }
            bool all_close = true;
            for (std::int32_t v : mem) {
                if (torus_distance(points[v], points[mem[leftmost]]) > close_r) {
                    all_close = false;
                    break;
                }
            }
            if (all_close) ++rep.k_prime[sz];
        }

        if (c != largest_idx) {
            for (int l = 1; l <= std::min(sz, ell_max); ++l) ++rep.k_tilde[l];
        }
    }
    return rep;
}

void snapshot_stats(const std::vector<Point>& points, double r,
                    SnapshotScratch& scratch, SnapshotStats& out) {
    const std::int32_t n = static_cast<std::int32_t>(points.size());
    out.isolated.clear();
    out.component_count = n;
    out.connected = true;
    if (n == 0) return;

    scratch.parent.resize(n);
    scratch.size.assign(n, 1);
    scratch.nonisolated.assign(n, 0);
    for (std::int32_t i = 0; i < n; ++i) scratch.parent[i] = i;

    auto find = [&](std::int32_t v) {
        std::int32_t root = v;
        while (scratch.parent[root] != root) root = scratch.parent[root];
        while (scratch.parent[v] != root) {
            std::int32_t next = scratch.parent[v];
            scratch.parent[v] = root;
            v = next;
        }
        return root;
    };

    std::int32_t merges = 0;
    const double r2 = r * r;
    auto link = [&](std::int32_t i, std::int32_t j) {
        scratch.nonisolated[i] = 1;
        scratch.nonisolated[j] = 1;
        std::int32_t ra = find(i), rb = find(j);
        if (ra == rb) return;
        if (scratch.size[ra] < scratch.size[rb]) std::swap(ra, rb);
        scratch.parent[rb] = ra;
        scratch.size[ra] += scratch.size[rb];
        ++merges;
    };

    const CellGrid grid = build_cell_grid(points, r);
    if (grid.all_pairs()) {
        for (std::int32_t i = 0; i < n; ++i) {
            for (std::int32_t j = i + 1; j < n; ++j) {
                if (torus_distance_sq(points[i], points[j]) <= r2) link(i, j);
            }
        }
    } else {
        const int k = grid.cells_per_axis();
        for (std::int32_t i = 0; i < n; ++i) {
            const int cx = grid.cell_of(points[i].x);
            const int cy = grid.cell_of(points[i].y);
            for (int dy = -1; dy <= 1; ++dy) {
                const int ny = (cy + dy + k) % k;
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = (cx + dx + k) % k;
                    for (std::int32_t j : grid.bucket(nx, ny)) {
                        if (j > i && torus_distance_sq(points[i], points[j]) <= r2) link(i, j);
                    }
                }
            }
        }
    }

    out.component_count = n - merges;
    out.connected = out.component_count <= 1;
    for (std::int32_t i = 0; i < n; ++i) {
        if (!scratch.nonisolated[i]) out.isolated.push_back(i);
    }
}

} // namespace dynrgg
