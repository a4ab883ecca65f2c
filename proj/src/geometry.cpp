#include "dynrgg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dynrgg {

double wrap(double v) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument("wrap: non-finite coordinate");
    }
    double w = v - std::floor(v);
    if (w >= 1.0) w = 0.0; // fractional part can round up to 1.0
    return w;
}

double min_image_offset(double delta) {
    return delta - std::ceil(delta - 0.5);
}

double torus_distance_sq(const Point& a, const Point& b) {
    double dx = std::fabs(a.x - b.x);
    if (dx > 0.5) dx = 1.0 - dx;
    double dy = std::fabs(a.y - b.y);
    if (dy > 0.5) dy = 1.0 - dy;
    return dx * dx + dy * dy;
}

double torus_distance(const Point& a, const Point& b) {
    return std::sqrt(torus_distance_sq(a, b));
}

CellGrid build_cell_grid(const std::vector<Point>& points, double r) {
    if (!(r > 0.0)) {
        throw std::invalid_argument("build_cell_grid: r must be positive");
    }
    for (const Point& p : points) {
        if (!(p.x >= 0.0 && p.x < 1.0 && p.y >= 0.0 && p.y < 1.0)) {
            throw std::invalid_argument("build_cell_grid: point not canonical");
        }
    }

    CellGrid g;
    g.point_count_ = points.size();

    int per_axis = static_cast<int>(std::floor(1.0 / r));
    const int cap = std::max(3, 2 * static_cast<int>(std::ceil(std::sqrt(
                                    static_cast<double>(points.size() + 1)))));
    per_axis = std::min(per_axis, cap);

    if (per_axis < 3) {
        // wrapped 3x3 neighborhoods would overlap; keep a degenerate grid
        g.cells_per_axis_ = std::max(per_axis, 1);
        g.cell_side_ = 1.0 / g.cells_per_axis_;
        g.all_pairs_ = true;
        return g;
    }

    g.cells_per_axis_ = per_axis;
    g.cell_side_ = 1.0 / per_axis;
    g.all_pairs_ = false;

    const std::size_t cells = static_cast<std::size_t>(per_axis) * per_axis;
    std::vector<std::int32_t> counts(cells, 0);
    std::vector<std::int32_t> cell_of_point(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const int cx = g.cell_of(points[i].x);
        const int cy = g.cell_of(points[i].y);
        const std::int32_t c = static_cast<std::int32_t>(cy) * per_axis + cx;
        cell_of_point[i] = c;
        ++counts[c];
    }
    g.starts_.assign(cells + 1, 0);
    for (std::size_t c = 0; c < cells; ++c) g.starts_[c + 1] = g.starts_[c] + counts[c];
    g.indices_.assign(points.size(), -1);
    std::vector<std::int32_t> cursor(g.starts_.begin(), g.starts_.end() - 1);
    for (std::size_t i = 0; i < points.size(); ++i) {
        g.indices_[cursor[cell_of_point[i]]++] = static_cast<std::int32_t>(i);
    }
    return g;
}

void neighbors_within_into(const CellGrid& grid, const std::vector<Point>& points,
                           std::int32_t i, double r, std::vector<std::int32_t>& out) {
    out.clear();
    if (i < 0 || static_cast<std::size_t>(i) >= points.size()) {
        throw std::out_of_range("neighbors_within: index " + std::to_string(i));
    }
    if (grid.point_count() != points.size()) {
        throw std::invalid_argument("neighbors_within: grid built for different points");
    }
    const double r2 = r * r;
    const Point pi = points[i];

    if (grid.all_pairs()) {
        for (std::int32_t j = 0; j < static_cast<std::int32_t>(points.size()); ++j) {
            if (j != i && torus_distance_sq(pi, points[j]) <= r2) out.push_back(j);
        }
        return;
    }

    const int k = grid.cells_per_axis();
    const int cx = grid.cell_of(pi.x);
    const int cy = grid.cell_of(pi.y);
    for (int dy = -1; dy <= 1; ++dy) {
        const int ny = (cy + dy + k) % k;
        for (int dx = -1; dx <= 1; ++dx) {
            const int nx = (cx + dx + k) % k;
            for (std::int32_t j : grid.bucket(nx, ny)) {
                if (j != i && torus_distance_sq(pi, points[j]) <= r2) out.push_back(j);
            }
        }
    }
    std::sort(out.begin(), out.end());
}

std::vector<std::int32_t> neighbors_within(const CellGrid& grid,
                                           const std::vector<Point>& points,
                                           std::int32_t i, double r) {
    std::vector<std::int32_t> out;
    neighbors_within_into(grid, points, i, r, out);
    return out;
}

} // namespace dynrgg
