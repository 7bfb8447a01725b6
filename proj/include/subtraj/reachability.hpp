#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "subtraj/free_space.hpp"
#include "subtraj/search_structs.hpp"

namespace subtraj {

enum class CritKind { boundary, greedy, internal_point };

struct CriticalPoint {
    double x, y;
    int row;  // row of the owning boundary segment (vertical sides) or row below the line
    int col;
    enum class Side { left, right, top, bottom } side;
    CritKind kind;
};

/// Endpoints of the white intervals of every aggregated-cell boundary
/// segment, deduplicated at shared corners.
std::vector<CriticalPoint> extract_boundary_critical_points(const FreeSpaceDiagram& fsd);

/// Directed graph over boundary critical points encoding all single-row and
/// single-column monotone paths. Per row: a range tree over the top-boundary
/// critical points and a blocking tree over the vertical boundaries; critical
/// points on vertical boundaries carry edges to the canonical tree nodes
/// covering their reachable top interval. Columns are handled symmetrically
/// (range tree over right-boundary points, edges from horizontal-boundary
/// points).
class ReachabilityGraph {
public:
    /// Maximal sequence of adjacent non-empty cells of one row (or column)
    /// whose shared boundaries carry white intervals. bx has one more entry
    /// than cells. For column runs the fields are transposed: bx holds the
    /// horizontal boundary y's and iv the white x-intervals on them.
    struct Run {
        int line = 0;                                // row (or column) index
        std::vector<int> cells;                      // indices into fsd.cells()
        std::vector<double> bx;                      // boundary coordinates
        std::vector<std::optional<FreeInterval>> iv; // boundary white intervals
        std::vector<int> node_lo, node_hi;           // crit node per boundary (-1 absent)
        std::vector<int> q_lo, q_hi;                 // rightmost/topmost reachable target per crit
        BlockTree blockers;                          // over interior boundaries 1..k-1
    };

    /// Range tree over the critical points of one row's top line (sorted by
    /// x) or one column's right line (sorted by y).
    struct LineTree {
        std::vector<int> leaves;
        std::vector<double> keys;
        RangeTree tree;
    };

    struct VRole { int run = -1; int boundary = -1; int q = -1; };
    struct HRole { int run = -1; int boundary = -1; int q = -1; };

    struct Node {
        double x = 0.0, y = 0.0;
        std::vector<VRole> vroles;  // roles on vertical boundaries (row machinery)
        std::vector<HRole> hroles;  // roles on horizontal boundaries (column machinery)
        bool greedy = false;
        // greedy-point hooks: location and reach targets in its row / column
        int g_row_run = -1, g_row_cell = -1, g_q_row = -1;
        int g_col_run = -1, g_col_cell = -1, g_q_col = -1;
    };

    static ReachabilityGraph build(const FreeSpaceDiagram& fsd);

    const FreeSpaceDiagram& fsd() const { return *fsd_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    std::size_t static_node_count() const { return static_nodes_; }
    std::size_t edge_count() const { return edge_count_; }

    const std::vector<Run>& row_runs() const { return row_runs_; }
    const std::vector<Run>& col_runs() const { return col_runs_; }
    const LineTree& row_tree(int row) const { return row_trees_[row]; }
    const LineTree& col_tree(int col) const { return col_trees_[col]; }
    int row_run_of_cell(int cell) const { return cell_row_run_[cell]; }
    int col_run_of_cell(int cell) const { return cell_col_run_[cell]; }

    struct RunPos {
        int run;
        int cell_index;  // index within run.cells of the cell ahead of p
    };
    std::optional<RunPos> locate_in_row(int row, Point p) const;
    std::optional<RunPos> locate_in_col(int col, Point p) const;

    /// Rightmost critical point on the row's top boundary reachable from the
    /// white point p by a monotone path inside the row. Throws when p is not
    /// white.
    std::optional<int> rightmost_reachable(int row, Point p) const;
    /// Topmost critical point on the column's right boundary reachable from p.
    std::optional<int> topmost_reachable(int col, Point p) const;

    /// Add a white point as a temporary node with row and column reach
    /// targets; removal is LIFO.
    int insert_greedy_point(Point p);
    void remove_greedy_point(int id);

    /// Monotone white path existence between two stored critical points
    /// (test/diagnostic query; expands canonical edges to leaves).
    bool reachable(int a, int b) const;

    // reach target computation from an arbitrary located point
    std::optional<int> rightmost_from(const Run& run, const RunPos& pos, double x, double y) const;
    std::optional<int> topmost_from(const Run& run, const RunPos& pos, double x, double y) const;

private:
    bool row_profile_reach(Point from, Point to) const;
    bool col_profile_reach(Point from, Point to) const;

    const FreeSpaceDiagram* fsd_ = nullptr;
    std::vector<Node> nodes_;
    std::size_t static_nodes_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<Run> row_runs_;
    std::vector<Run> col_runs_;
    std::vector<LineTree> row_trees_;
    std::vector<LineTree> col_trees_;
    std::vector<int> cell_row_run_;
    std::vector<int> cell_col_run_;
};

ReachabilityGraph build_graph(const FreeSpaceDiagram& fsd);

}  // namespace subtraj
