#pragma once

#include <random>
#include <vector>

#include "subtraj/geometry.hpp"

namespace subtraj::testutil {

// small random polyline with unit-ish edges
inline Trajectory random_curve(std::mt19937& rng, int n, double turn_sigma = 0.6) {
    std::normal_distribution<double> turn(0.0, turn_sigma);
    std::uniform_real_distribution<double> step(0.5, 1.5);
    double heading = std::uniform_real_distribution<double>(0.0, 6.283)(rng);
    double x = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    double y = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) {
        pts.push_back({x, y});
        heading += turn(rng);
        double s = step(rng);
        x += s * std::cos(heading);
        y += s * std::sin(heading);
    }
    return Trajectory(std::move(pts));
}

inline Point random_point_on(const Trajectory& t, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, t.length());
    return t.point_at(u(rng));
}

}  // namespace subtraj::testutil
