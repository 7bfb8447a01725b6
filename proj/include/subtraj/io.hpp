#pragma once

#include <string>

#include <json.hpp>

#include "subtraj/cluster.hpp"
#include "subtraj/geometry.hpp"

namespace subtraj {

// Locale-independent shortest round-trip formatting.
std::string format_double(double v);

/// CSV with one "x,y" pair per line, dot decimal separator, optional single
/// "x,y" header, blank lines ignored.
Trajectory read_trajectory_csv(const std::string& path);
Trajectory parse_trajectory_csv(const std::string& text);
std::string trajectory_to_csv(const Trajectory& t);
void write_trajectory_csv(const Trajectory& t, const std::string& path);

/// Deterministic test-curve generators.
///   spiral:    Archimedean spiral with unit radial pitch
///   lawnmower: boustrophedon sweep, row length 10*gap-independent width,
///              row spacing gap
///   walk:      smoothed random walk with unit steps
Trajectory generate_trajectory(const std::string& kind, int n, unsigned seed, double gap = 1.0);

nlohmann::json witness_to_json(const ClusterWitness& w);
nlohmann::json report_to_json(const ClusterQuery& q, const DecideResult& r,
                              double packedness_estimate);

}  // namespace subtraj
