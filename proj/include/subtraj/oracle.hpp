#pragma once

#include <optional>

#include "subtraj/cluster.hpp"
#include "subtraj/free_space.hpp"
#include "subtraj/geometry.hpp"

namespace subtraj {

/// Sub-interval of [0,1] where the segment lies within distance d of center.
std::optional<FreeInterval> circle_segment_interval(Point center, double d, const Segment& s);

/// Exact free space of two trajectories over their original edges:
/// white(x, y) iff dist(P(x), Q(y)) <= d.
class ExactFreeSpace {
public:
    ExactFreeSpace(Trajectory p, Trajectory q, double d);

    bool white(double x, double y) const;
    double d() const { return d_; }
    const Trajectory& p() const { return p_; }
    const Trajectory& q() const { return q_; }

    // white interval (global y) of the vertical line at arc x within Q edge j
    std::optional<FreeInterval> vertical(double x, std::size_t j) const;
    // white interval (global x) of the horizontal line at arc y within P edge i
    std::optional<FreeInterval> horizontal(std::size_t i, double y) const;

private:
    Trajectory p_, q_;
    double d_;
};

/// Continuous Fréchet decision via monotone reachability propagation over the
/// exact free space.
bool frechet_decide(const Trajectory& p, const Trajectory& q, double d);

/// Lowest y on the line x = t reachable from (s, a) by a monotone path
/// through the exact free space of (tr, tr); +infinity when unreachable.
double exact_lowest_end(const Trajectory& tr, double d, double s, double a, double t);

/// Exact greedy path count for one window, matching the semantics of
/// count_disjoint_paths but on the exact free space at distance d.
int exact_count_paths(const Trajectory& tr, double d, double s, double t, int cap);

/// Exact brute-force SC decision at distance q.d on small inputs (n <= 14).
/// Vertex mode enumerates all vertex windows of length >= l; arbitrary mode
/// anchors windows on a uniform grid of grid_steps steps plus all exact
/// critical x-coordinates, with t = s + l.
bool sc_bruteforce(const Trajectory& tr, const ClusterQuery& q, int grid_steps = 2048);

}  // namespace subtraj
