#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "subtraj/geometry.hpp"
#include "subtraj/simplify.hpp"

namespace subtraj {

/// Parameters of the length-preserving simplified free space. The internal
/// simplification parameter is eps/8 so that the white predicate sits between
/// the exact free space at d and the exact free space at (1+eps)d.
struct FreeSpaceConfig {
    double d;
    double eps;
    double eps_int;    // eps / 8
    double threshold;  // (1 + 4*eps_int) * d == (1 + eps/2) * d

    FreeSpaceConfig(double d_, double eps_) : d(d_), eps(eps_) {
        if (!(d > 0.0)) throw std::invalid_argument("free space: d must be positive");
        if (!(eps > 0.0)) throw std::invalid_argument("free space: eps must be positive");
        eps_int = eps / 8.0;
        threshold = (1.0 + 4.0 * eps_int) * d;
    }
    double mu() const { return eps_int * d; }
};

struct FreeInterval {
    double lo;
    double hi;
};

/// One affine sub-map of a cell: h(x,y) = A*(x,y) + c on a sub-rectangle,
/// where h is the displacement between the mapped simplification points. The
/// white set {|h| <= threshold} within the sub-rectangle is convex.
struct Quadrant {
    double x0, x1, y0, y1;       // sub-rectangle, local cell coordinates
    double ax, ay;               // column d h / d x
    double bx, by;               // column d h / d y
    double cx, cy;               // offset: h(0,0)

    bool contains(double x, double y) const {
        return x >= x0 && x <= x1 && y >= y0 && y <= y1;
    }
    double hx(double x, double y) const { return ax * x + bx * y + cx; }
    double hy(double x, double y) const { return ay * x + by * y + cy; }
    double norm2_at(double x, double y) const {
        double u = hx(x, y), v = hy(x, y);
        return u * u + v * v;
    }
};

/// Geometry of one aggregated cell: the rectangle spanned by one simplified
/// segment of each curve in source arc-length coordinates, partitioned at the
/// two map breakpoints into up to four affine quadrants.
class CellGeometry {
public:
    CellGeometry(const SimplificationMap& pm, const SimplificationMap& qm,
                 std::size_t col, std::size_t row, double threshold);

    double width() const { return width_; }
    double height() const { return height_; }
    double split_x() const { return wx_; }
    double split_y() const { return wy_; }
    double threshold() const { return threshold_; }
    const std::vector<Quadrant>& quadrants() const { return quads_; }

    bool white(double x, double y) const;  // local coordinates
    double displacement_norm(double x, double y) const;
    // White sub-interval of the vertical line at local x (or horizontal at y)
    // within the cell; empty optional when the line misses the white set.
    std::optional<FreeInterval> vertical_interval(double x) const;
    std::optional<FreeInterval> horizontal_interval(double y) const;

    struct Extremes {
        Point leftmost, rightmost, lowest, highest;  // local coordinates
    };
    // Extreme white points; cell must be non-empty. Ties resolve toward
    // smaller y, then smaller x.
    Extremes extremes() const;

private:
    const Quadrant& quad_at(double x, double y) const;

    double width_, height_, wx_, wy_, threshold_;
    std::vector<Quadrant> quads_;
};

struct AggregatedCell {
    int row;      // simplified segment index of Q
    int col;      // simplified segment index of P
    double x0;    // global source arc of the P segment start
    double y0;    // global source arc of the Q segment start
    CellGeometry geom;
    // nearest non-empty cell in the four directions, -1 when absent
    int left = -1, right = -1, up = -1, down = -1;
};

/// All pairs (i, j) with segment_segment_distance(psegs[i], qsegs[j]) <= r,
/// found with a uniform grid of cell side r so the work is output sensitive.
std::vector<std::pair<std::size_t, std::size_t>> near_segment_pairs(
    const std::vector<Segment>& psegs, const std::vector<Segment>& qsegs, double r);

/// Non-empty cell geometry for the (col, row) pair of simplified segments, or
/// nullopt when no point of the rectangle is white. Emptiness is decided from
/// the distance between the two simplified segments, which is exact here.
std::optional<CellGeometry> build_cell(const SimplificationMap& pm, const SimplificationMap& qm,
                                       std::size_t col, std::size_t row,
                                       const FreeSpaceConfig& cfg);

class FreeSpaceDiagram {
public:
    FreeSpaceDiagram(FreeSpaceConfig cfg, SimplificationMap p_map, SimplificationMap q_map,
                     std::vector<AggregatedCell> cells);

    const FreeSpaceConfig& config() const { return cfg_; }
    const SimplificationMap& p_map() const { return p_map_; }
    const SimplificationMap& q_map() const { return q_map_; }
    const std::vector<AggregatedCell>& cells() const { return cells_; }
    std::size_t cell_count() const { return cells_.size(); }

    double width() const { return p_map_.curve().source().length(); }
    double height() const { return q_map_.curve().source().length(); }
    std::size_t column_count() const { return p_map_.segment_count(); }
    std::size_t row_count() const { return q_map_.segment_count(); }

    // cells of one row in column order / one column in row order, as indices
    // into cells()
    std::pair<std::size_t, std::size_t> row_span(int row) const;  // into cells()
    std::pair<std::size_t, std::size_t> col_span(int col) const;  // into col_order()
    const std::vector<int>& col_order() const { return col_order_; }
    int cell_at(int row, int col) const;  // -1 when empty

    // definition-level white predicate in global coordinates
    bool is_white(double x, double y) const;
    // distance between the mapped simplification points at (x, y)
    double displacement(double x, double y) const;
    // white up to a hair of slack; accepts points computed to lie exactly on
    // the free-space boundary
    bool is_white_tol(double x, double y) const {
        return displacement(x, y) <= cfg_.threshold * (1.0 + 1e-9);
    }

    // White interval of the vertical line at global x within one cell, in
    // global y coordinates (and the horizontal counterpart). The line must
    // intersect the cell's rectangle.
    std::optional<FreeInterval> vertical_interval(int cell, double x) const;
    std::optional<FreeInterval> horizontal_interval(int cell, double y) const;

    int column_of(double x) const;  // simplified P segment containing arc x
    int row_of(double y) const;

    // Sorted white intervals (with owning cell index) of the full vertical
    // line at global x.
    std::vector<std::pair<int, FreeInterval>> vertical_line_intervals(double x) const;

private:
    FreeSpaceConfig cfg_;
    SimplificationMap p_map_;
    SimplificationMap q_map_;
    std::vector<AggregatedCell> cells_;   // sorted by (row, col)
    std::vector<int> col_order_;          // indices into cells_, sorted by (col, row)
    std::vector<std::size_t> row_start_;  // per row, first index in cells_
    std::vector<std::size_t> col_start_;  // per col, first index in col_order_
};

struct BuildTimings {
    double ms_simplify = 0.0;
    double ms_pairs = 0.0;
    double ms_cells = 0.0;
};

/// Build the simplified free space diagram of P and Q: simplify both at
/// radius eps_int*d, find near segment pairs within the white threshold,
/// construct per-pair cell geometry, sort and link neighbors.
FreeSpaceDiagram build_diagram(const Trajectory& p, const Trajectory& q,
                               const FreeSpaceConfig& cfg, BuildTimings* timings = nullptr);

}  // namespace subtraj
