#include "subtraj/geometry.hpp"

#include <algorithm>
#include <limits>

namespace subtraj {

Trajectory::Trajectory(std::vector<Point> pts) {
    if (pts.size() < 2) throw std::invalid_argument("trajectory: need at least 2 vertices");
    double scale = 0.0;
    for (const Point& p : pts) {
        if (!finite(p)) throw std::invalid_argument("trajectory: non-finite vertex");
        scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
    }
    const double merge_tol = 1e-12 * std::max(1.0, scale);
    vertices_.reserve(pts.size());
    vertices_.push_back(pts[0]);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (dist(pts[i], vertices_.back()) > merge_tol) vertices_.push_back(pts[i]);
    }
    if (vertices_.size() < 2) throw std::invalid_argument("trajectory: degenerate (single point)");
    prefix_.resize(vertices_.size());
    prefix_[0] = 0.0;
    for (std::size_t i = 1; i < vertices_.size(); ++i)
        prefix_[i] = prefix_[i - 1] + dist(vertices_[i - 1], vertices_[i]);
}

std::size_t Trajectory::edge_index_at(double x) const {
    auto it = std::upper_bound(prefix_.begin(), prefix_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - prefix_.begin());
    if (i == 0) return 0;
    if (i >= prefix_.size()) return prefix_.size() - 2;
    return i - 1;
}

Point Trajectory::point_at(double x) const {
    const double tol = kRelTol * length();
    if (x < -tol || x > length() + tol)
        throw std::domain_error("point_at: arc length out of range");
    x = std::clamp(x, 0.0, length());
    std::size_t i = edge_index_at(x);
    double seg = prefix_[i + 1] - prefix_[i];
    double t = (x - prefix_[i]) / seg;
    return vertices_[i] + (vertices_[i + 1] - vertices_[i]) * t;
}

double point_segment_distance(Point p, const Segment& s) {
    Point d = s.b - s.a;
    double t = dot(p - s.a, d) / norm2(d);
    t = std::clamp(t, 0.0, 1.0);
    return dist(p, s.a + d * t);
}

namespace {

int orient(Point a, Point b, Point c) {
    double v = cross(b - a, c - a);
    double mag = norm(b - a) * norm(c - a);
    if (std::abs(v) <= 1e-14 * std::max(1.0, mag)) return 0;
    return v > 0 ? 1 : -1;
}

bool on_segment_collinear(Point a, Point b, Point p) {
    return std::min(a.x, b.x) - 1e-14 <= p.x && p.x <= std::max(a.x, b.x) + 1e-14 &&
           std::min(a.y, b.y) - 1e-14 <= p.y && p.y <= std::max(a.y, b.y) + 1e-14;
}

bool segments_intersect(const Segment& s, const Segment& t) {
    int o1 = orient(s.a, s.b, t.a);
    int o2 = orient(s.a, s.b, t.b);
    int o3 = orient(t.a, t.b, s.a);
    int o4 = orient(t.a, t.b, s.b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment_collinear(s.a, s.b, t.a)) return true;
    if (o2 == 0 && on_segment_collinear(s.a, s.b, t.b)) return true;
    if (o3 == 0 && on_segment_collinear(t.a, t.b, s.a)) return true;
    if (o4 == 0 && on_segment_collinear(t.a, t.b, s.b)) return true;
    return false;
}

}  // namespace

double segment_segment_distance(const Segment& s, const Segment& t) {
    if (segments_intersect(s, t)) return 0.0;
    double d = point_segment_distance(s.a, t);
    d = std::min(d, point_segment_distance(s.b, t));
    d = std::min(d, point_segment_distance(t.a, s));
    d = std::min(d, point_segment_distance(t.b, s));
    return d;
}

namespace {

// Roots of |p0 + t*d - c|^2 = r^2 for t in [0,1], ascending. Stable form of
// the quadratic; at most two roots.
int circle_edge_roots(Point p0, Point d, Point c, double r, double out[2]) {
    Point f = p0 - c;
    double qa = norm2(d);
    double qb = dot(f, d);                // half of the linear coefficient
    double qc = norm2(f) - r * r;
    double disc = qb * qb - qa * qc;
    if (disc < 0.0) return 0;
    double sq = std::sqrt(disc);
    double t1, t2;
    if (qb >= 0.0) {
        t1 = (-qb - sq) / qa;
        t2 = (sq - qb) / qa;  // == qc / (qa * t1) when t1 != 0, but direct form is fine here
    } else {
        t1 = (-qb - sq) / qa;
        t2 = (-qb + sq) / qa;
    }
    if (t1 > t2) std::swap(t1, t2);
    int n = 0;
    const double eps = 1e-12;
    if (t1 >= -eps && t1 <= 1.0 + eps) out[n++] = std::clamp(t1, 0.0, 1.0);
    if (disc > 0.0 && t2 >= -eps && t2 <= 1.0 + eps) out[n++] = std::clamp(t2, 0.0, 1.0);
    return n;
}

}  // namespace

std::optional<double> ball_exit_point(const Trajectory& t, double start_x, const Ball& ball) {
    const double len = t.length();
    if (start_x < -kRelTol * len || start_x > len * (1.0 + kRelTol))
        throw std::domain_error("ball_exit_point: start out of range");
    start_x = std::clamp(start_x, 0.0, len);
    if (dist(t.point_at(start_x), ball.center) > ball.radius * (1.0 + 1e-9))
        throw std::invalid_argument("ball_exit_point: start not inside ball");

    const auto& pre = t.prefix_lengths();
    for (std::size_t i = t.edge_index_at(start_x); i + 1 < pre.size(); ++i) {
        Point p0 = t.vertex(i);
        Point d = t.vertex(i + 1) - p0;
        double roots[2];
        int n = circle_edge_roots(p0, d, ball.center, ball.radius, roots);
        double elen = pre[i + 1] - pre[i];
        for (int k = 0; k < n; ++k) {
            double x = pre[i] + roots[k] * elen;
            if (x > start_x + 1e-12 * std::max(1.0, len)) return std::min(x, len);
        }
    }
    return std::nullopt;
}

double length_inside_ball(const Trajectory& t, const Ball& ball) {
    double total = 0.0;
    const auto& pre = t.prefix_lengths();
    for (std::size_t i = 0; i + 1 < pre.size(); ++i) {
        Point p0 = t.vertex(i);
        Point d = t.vertex(i + 1) - p0;
        // inside-interval of the quadratic on [0,1]
        Point f = p0 - ball.center;
        double qa = norm2(d);
        double qb = dot(f, d);
        double qc = norm2(f) - ball.radius * ball.radius;
        double disc = qb * qb - qa * qc;
        if (disc <= 0.0) continue;  // never strictly inside
        double sq = std::sqrt(disc);
        double lo = std::max(0.0, (-qb - sq) / qa);
        double hi = std::min(1.0, (-qb + sq) / qa);
        if (hi > lo) total += (hi - lo) * (pre[i + 1] - pre[i]);
    }
    return total;
}

double packedness_lower_bound(const Trajectory& t, int samples) {
    if (samples < 1) throw std::invalid_argument("packedness_lower_bound: samples >= 1");
    std::vector<Point> centers;
    centers.reserve(2 * t.size());
    for (std::size_t i = 0; i < t.size(); ++i) centers.push_back(t.vertex(i));
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        centers.push_back((t.vertex(i) + t.vertex(i + 1)) * 0.5);

    // quantiles of the prefix-length sequence, interpolated
    const auto& pre = t.prefix_lengths();
    std::vector<double> arcs;
    arcs.reserve(samples);
    for (int k = 1; k <= samples; ++k) {
        double pos = (static_cast<double>(k) / samples) * (pre.size() - 1);
        std::size_t i = std::min(static_cast<std::size_t>(pos), pre.size() - 2);
        double frac = pos - static_cast<double>(i);
        arcs.push_back(pre[i] + frac * (pre[i + 1] - pre[i]));
    }

    double best = 0.0;
    const double min_r = 1e-9 * std::max(1.0, t.length());
    for (const Point& c : centers) {
        for (double a : arcs) {
            double r = dist(c, t.point_at(a));
            if (r <= min_r) continue;
            best = std::max(best, length_inside_ball(t, Ball(c, r)) / r);
        }
    }
    return best;
}

Trajectory subtrajectory(const Trajectory& t, double a, double b) {
    const double len = t.length();
    a = std::clamp(a, 0.0, len);
    b = std::clamp(b, 0.0, len);
    if (b < a) throw std::invalid_argument("subtrajectory: b < a");
    std::vector<Point> pts;
    pts.push_back(t.point_at(a));
    const auto& pre = t.prefix_lengths();
    for (std::size_t i = 0; i < pre.size(); ++i)
        if (pre[i] > a && pre[i] < b) pts.push_back(t.vertex(i));
    pts.push_back(t.point_at(b));
    if (pts.size() < 2 || dist(pts.front(), pts.back()) == 0.0) {
        // degenerate range collapses to a point; represent as a tiny stub so
        // downstream distance checks still work
        Point p = t.point_at(a);
        double h = std::max(1e-12, 1e-12 * std::max(1.0, len));
        return Trajectory({p, {p.x + h, p.y}});
    }
    return Trajectory(std::move(pts));
}

}  // namespace subtraj
