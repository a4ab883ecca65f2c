#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dynrgg {

/// A position on the unit torus [0,1)^2. Coordinates are kept canonical
/// (in [0,1)) at all times.
struct Point {
    double x{0.0};
    double y{0.0};
};

/// v mod 1, canonical in [0,1). Throws std::invalid_argument on non-finite
/// input. Negative zero and values whose fractional part rounds up to 1.0
/// both map to 0.0.
double wrap(double v);

/// Representative of delta mod 1 in (-1/2, 1/2].
double min_image_offset(double delta);

/// Euclidean distance on the torus: per-axis deltas take the shorter way
/// around. Symmetric, bounded by sqrt(2)/2.
double torus_distance(const Point& a, const Point& b);

/// Squared torus distance (no sqrt; use for comparisons).
double torus_distance_sq(const Point& a, const Point& b);

/// Fixed-radius neighbor index over the torus. The square is cut into
/// cells_per_axis^2 cells of side 1/cells_per_axis >= r, so any pair at
/// distance <= r shares a cell or sits in 8-neighboring cells (wrapping).
///
/// If fewer than three cells fit per axis the wrapped neighborhoods overlap
/// and the structure degrades to an all-pairs scan (all_pairs() == true).
/// cells_per_axis is also capped near 2*sqrt(n) so sparse instances do not
/// allocate quadratically many empty cells.
class CellGrid {
  public:
    CellGrid() = default;

    int cells_per_axis() const { return cells_per_axis_; }
    double cell_side() const { return cell_side_; }
    bool all_pairs() const { return all_pairs_; }
    std::size_t point_count() const { return point_count_; }

    int cell_of(double coord) const {
        int c = static_cast<int>(coord * cells_per_axis_);
        return c >= cells_per_axis_ ? cells_per_axis_ - 1 : c;
    }

    std::span<const std::int32_t> bucket(int cx, int cy) const {
        const std::size_t b = static_cast<std::size_t>(cy) * cells_per_axis_ + cx;
        return {indices_.data() + starts_[b], indices_.data() + starts_[b + 1]};
    }

    friend CellGrid build_cell_grid(const std::vector<Point>& points, double r);

  private:
    int cells_per_axis_{0};
    double cell_side_{0.0};
    bool all_pairs_{true};
    std::size_t point_count_{0};
    std::vector<std::int32_t> starts_;  // CSR offsets, size cells^2+1
    std::vector<std::int32_t> indices_; // point ids grouped by cell
};

/// Bucket all points for radius-r queries. Throws std::invalid_argument if
/// r <= 0 or any point is not canonical.
CellGrid build_cell_grid(const std::vector<Point>& points, double r);

/// Exactly { j != i : torus_distance(points[i], points[j]) <= r }, ascending.
/// The grid must have been built for these points with cell_side >= r.
/// Throws std::out_of_range on a bad index.
std::vector<std::int32_t> neighbors_within(const CellGrid& grid,
                                           const std::vector<Point>& points,
                                           std::int32_t i, double r);

/// Same, appending into `out` (cleared first). Scratch-friendly form used by
/// the parallel graph build.
void neighbors_within_into(const CellGrid& grid, const std::vector<Point>& points,
                           std::int32_t i, double r, std::vector<std::int32_t>& out);

} // namespace dynrgg
