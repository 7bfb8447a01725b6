#pragma once

#include <vector>

#include "subtraj/geometry.hpp"

namespace subtraj {

/// Greedy radius-mu vertex subsampling of a trajectory: starting from the
/// first vertex, the next kept vertex is the first one outside the ball of
/// radius mu around the previous kept vertex; the final vertex is always
/// kept. Every kept segment except possibly the last has length >= mu; a
/// shorter last segment is flagged short_final.
class SimplifiedCurve {
public:
    static SimplifiedCurve greedy(const Trajectory& source, double mu);
    // Build from an explicit vertex subsequence (used by tests and tools).
    static SimplifiedCurve from_indices(const Trajectory& source, double mu,
                                        std::vector<std::size_t> indices);

    const Trajectory& source() const { return source_; }
    const Trajectory& simplified() const { return simplified_; }
    double mu() const { return mu_; }
    const std::vector<std::size_t>& vertex_indices() const { return indices_; }
    bool short_final() const { return short_final_; }
    std::size_t segment_count() const { return indices_.size() - 1; }

private:
    SimplifiedCurve(Trajectory src, double mu, std::vector<std::size_t> idx);

    Trajectory source_;
    double mu_;
    std::vector<std::size_t> indices_;
    Trajectory simplified_;
    bool short_final_;
};

/// Per-segment piece of the source->simplified arc-length map. The subcurve
/// between kept vertices u,v splits at w (first ball-boundary crossing); arc
/// [u,w] maps uniformly onto chord arc [0, uprime_arc] and [w,v] onto
/// [uprime_arc, seg_len].
struct PieceMap {
    double w_arc;       // split arc along the source subcurve, from u
    double uprime_arc;  // split arc along the chord (== mu unless short_final)
    double sub_len;     // source arc length of the subcurve
    double seg_len;     // chord length |uv|
};

/// The global continuous non-decreasing map f from source arc length onto
/// simplified arc length, pieced together from one PieceMap per segment.
class SimplificationMap {
public:
    explicit SimplificationMap(SimplifiedCurve curve);

    const SimplifiedCurve& curve() const { return curve_; }
    const std::vector<PieceMap>& pieces() const { return pieces_; }
    const std::vector<double>& source_breakpoints() const { return breaks_; }

    std::size_t segment_count() const { return pieces_.size(); }
    // source arc range [lo, hi) of segment i
    double segment_source_lo(std::size_t i) const { return src_vertex_arc_[i]; }
    double segment_source_hi(std::size_t i) const { return src_vertex_arc_[i + 1]; }
    // simplified arc of kept vertex i
    double simplified_vertex_arc(std::size_t i) const { return simp_vertex_arc_[i]; }
    Segment segment(std::size_t i) const {
        return Segment(curve_.simplified().vertex(i), curve_.simplified().vertex(i + 1));
    }

    double map_param(double x) const;
    // point on the simplified curve that source arc x maps to
    Point map_point(double x) const;
    // simplified segment containing source arc x (ties resolve rightward)
    std::size_t segment_of(double x) const;

private:
    SimplifiedCurve curve_;
    std::vector<PieceMap> pieces_;
    std::vector<double> src_vertex_arc_;   // source arc of each kept vertex
    std::vector<double> simp_vertex_arc_;  // simplified arc of each kept vertex
    std::vector<double> breaks_;
};

SimplifiedCurve simplify_curve(const Trajectory& t, double mu);
SimplificationMap build_map(SimplifiedCurve curve);

}  // namespace subtraj
