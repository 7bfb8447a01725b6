#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace subtraj {

// Relative tolerance used throughout; scaled by local magnitudes at each use.
inline constexpr double kRelTol = 1e-9;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
inline Point operator*(double s, Point a) { return a * s; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double norm2(Point a) { return a.x * a.x + a.y * a.y; }
inline double dist(Point a, Point b) { return norm(a - b); }
inline bool finite(Point a) { return std::isfinite(a.x) && std::isfinite(a.y); }

struct Segment {
    Point a;
    Point b;

    Segment(Point a_, Point b_) : a(a_), b(b_) {
        if (!finite(a) || !finite(b)) throw std::invalid_argument("segment: non-finite endpoint");
        if (a.x == b.x && a.y == b.y) throw std::invalid_argument("segment: zero length");
    }
    double length() const { return dist(a, b); }
    Point at(double t) const { return a + (b - a) * t; }
};

struct Ball {
    Point center;
    double radius;

    Ball(Point c, double r) : center(c), radius(r) {
        if (!finite(c) || !std::isfinite(r) || r <= 0.0)
            throw std::invalid_argument("ball: radius must be positive");
    }
};

/// Polyline with exact arc-length parameterization. Duplicate consecutive
/// vertices are merged at construction so prefix lengths are strictly
/// increasing.
class Trajectory {
public:
    explicit Trajectory(std::vector<Point> pts);

    std::size_t size() const { return vertices_.size(); }
    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<double>& prefix_lengths() const { return prefix_; }
    double length() const { return prefix_.back(); }

    const Point& vertex(std::size_t i) const { return vertices_[i]; }
    Segment edge(std::size_t i) const { return Segment(vertices_[i], vertices_[i + 1]); }
    std::size_t edge_count() const { return vertices_.size() - 1; }

    // Point at arc length x. x is clamped within kRelTol*length(); beyond
    // that a domain error is thrown.
    Point point_at(double x) const;

    // Index of the edge containing arc length x (ties resolve to the edge
    // starting at x, last edge for x == length()). Assumes x already in range.
    std::size_t edge_index_at(double x) const;

private:
    std::vector<Point> vertices_;
    std::vector<double> prefix_;
};

double point_segment_distance(Point p, const Segment& s);

// Minimum distance between two closed segments; zero iff they intersect.
double segment_segment_distance(const Segment& s, const Segment& t);

/// First arc length x' > start_x where the trajectory meets the ball
/// boundary. Requires the point at start_x to lie inside the ball; returns
/// nullopt when the whole suffix stays inside.
std::optional<double> ball_exit_point(const Trajectory& t, double start_x, const Ball& ball);

// Total arc length of the part of t inside the closed ball.
double length_inside_ball(const Trajectory& t, const Ball& ball);

/// Lower bound on the packedness of t: max of len(t ∩ B)/r over candidate
/// balls centered at vertices and edge midpoints, with radii taken from
/// `samples` quantiles of the prefix-length sequence.
double packedness_lower_bound(const Trajectory& t, int samples);

// Subcurve of t between arc lengths a <= b as its own trajectory.
Trajectory subtrajectory(const Trajectory& t, double a, double b);

}  // namespace subtraj
