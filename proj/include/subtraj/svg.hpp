#pragma once

#include <string>
#include <vector>

#include "subtraj/free_space.hpp"

namespace subtraj {

/// White regions of the diagram as polygons in diagram coordinates, one or
/// more per cell (per-quadrant clipped ellipses approximated by <= 64-point
/// polylines).
std::vector<std::vector<Point>> white_region_polygons(const FreeSpaceDiagram& fsd);

bool point_in_polygon(const std::vector<Point>& poly, Point p);

/// SVG 1.1 rendering: cell rectangles, white regions, boundary critical
/// point marks, axes in original arc length.
std::string render_free_space_svg(const FreeSpaceDiagram& fsd, int canvas = 800);

}  // namespace subtraj
