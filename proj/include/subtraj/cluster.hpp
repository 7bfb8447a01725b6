#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subtraj/free_space.hpp"
#include "subtraj/geometry.hpp"
#include "subtraj/reachability.hpp"

namespace subtraj {

enum class Mode { vertex, arbitrary };

struct ClusterQuery {
    int m;
    double l;
    double d;
    double eps;
    Mode mode = Mode::vertex;
};

struct Window {
    double s;
    double t;
};

struct InternalCriticalPoint {
    double x, y;
    enum class Kind { end_of_cell, propagated, l_apart, boundary } kind;
};

struct ClusterWitness {
    double ref_lo = 0.0, ref_hi = 0.0;
    std::vector<std::pair<double, double>> members;  // arc ranges [p_i, q_i]
};

struct DecideStats {
    std::size_t cells = 0;
    std::size_t graph_nodes = 0;
    std::size_t graph_edges = 0;
    std::size_t boundary_points = 0;
    std::size_t end_of_cell_points = 0;
    std::size_t propagated_points = 0;
    std::size_t l_apart_points = 0;
    std::size_t windows = 0;
    bool perturbed = false;
    double l_effective = 0.0;
    double ms_simplify = 0.0, ms_pairs = 0.0, ms_cells = 0.0, ms_graph = 0.0, ms_sweep = 0.0;
};

struct DecideResult {
    bool yes = false;
    std::optional<ClusterWitness> witness;
    DecideStats stats;
};

/// One window per vertex: (arc(v), arc of the first vertex at least l
/// further). Vertices with no valid end produce no window.
std::vector<Window> windows_vertex(const Trajectory& t, double l);

/// End-of-cell, propagated, l-apart and boundary critical points of the
/// diagram, deduplicated and sorted by x.
std::vector<InternalCriticalPoint> internal_critical_points(const FreeSpaceDiagram& fsd, double l);

/// Detects cell pairs whose free-space boundary arcs coincide under an
/// x-shift of exactly l (which would generate infinitely many l-apart
/// points) and nudges l by eps^2*d until the coincidence disappears.
std::pair<double, bool> perturb_if_degenerate(const FreeSpaceDiagram& fsd, double l);

/// Shared state of the greedy sweep: per-window memoization of the lowest
/// reachable end on l_t plus persistent dead-end marks (a node that cannot
/// reach the current l_t can never reach a later one).
class SweepState {
public:
    SweepState(const FreeSpaceDiagram& fsd, ReachabilityGraph& g);

    void set_window_line(double t);
    double t() const { return t_; }

    // lowest white y on l_t reachable from the white point p; +inf when
    // l_t is unreachable
    double lowest_end(Point p);

    std::uint64_t expansions() const { return expansions_; }

private:
    friend int count_disjoint_paths(const FreeSpaceDiagram&, ReachabilityGraph&, Window, int,
                                    SweepState&, std::vector<std::pair<double, double>>*);
    double node_value(int id);
    double tree_value(bool row, int line, int tnode);
    double row_exit(const ReachabilityGraph::Run& run, int cell_index, double x_start, double h);
    double col_exit(const ReachabilityGraph::Run& run, int cell_index, double x_prof, double y_start);

    const FreeSpaceDiagram* fsd_;
    ReachabilityGraph* g_;
    double t_ = -1.0;
    std::uint32_t epoch_ = 0;
    std::vector<std::uint32_t> stamp_;
    std::vector<double> val_;
    std::vector<char> dead_;
    std::vector<std::size_t> row_base_, col_base_;
    std::size_t slots_ = 0;
    std::uint64_t expansions_ = 0;
};

/// Greedy count of monotone paths from l_s to l_t whose y-spans fit below s
/// or above t, pairwise overlapping in at most one point; saturates at cap.
int count_disjoint_paths(const FreeSpaceDiagram& fsd, ReachabilityGraph& g, Window w, int cap,
                         SweepState& st, std::vector<std::pair<double, double>>* members = nullptr);

DecideResult decide(const Trajectory& t, const ClusterQuery& q);

}  // namespace subtraj
