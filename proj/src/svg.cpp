#include "subtraj/svg.hpp"

#include <algorithm>
#include <cmath>

#include "subtraj/io.hpp"
#include "subtraj/reachability.hpp"

namespace subtraj {

namespace {

// Sutherland-Hodgman clip of a polygon against an axis-aligned rectangle
std::vector<Point> clip_rect(std::vector<Point> poly, double x0, double y0, double x1, double y1) {
    auto clip_edge = [](const std::vector<Point>& in, auto inside, auto intersect) {
        std::vector<Point> out;
        for (std::size_t i = 0; i < in.size(); ++i) {
            Point a = in[i];
            Point b = in[(i + 1) % in.size()];
            bool ia = inside(a), ib = inside(b);
            if (ia) out.push_back(a);
            if (ia != ib) out.push_back(intersect(a, b));
        }
        return out;
    };
    auto lerp_x = [](Point a, Point b, double x) {
        double t = (x - a.x) / (b.x - a.x);
        return Point{x, a.y + t * (b.y - a.y)};
    };
    auto lerp_y = [](Point a, Point b, double y) {
        double t = (y - a.y) / (b.y - a.y);
        return Point{a.x + t * (b.x - a.x), y};
    };
    poly = clip_edge(poly, [&](Point p) { return p.x >= x0; },
                     [&](Point a, Point b) { return lerp_x(a, b, x0); });
    if (poly.empty()) return poly;
    poly = clip_edge(poly, [&](Point p) { return p.x <= x1; },
                     [&](Point a, Point b) { return lerp_x(a, b, x1); });
    if (poly.empty()) return poly;
    poly = clip_edge(poly, [&](Point p) { return p.y >= y0; },
                     [&](Point a, Point b) { return lerp_y(a, b, y0); });
    if (poly.empty()) return poly;
    poly = clip_edge(poly, [&](Point p) { return p.y <= y1; },
                     [&](Point a, Point b) { return lerp_y(a, b, y1); });
    return poly;
}

// polygon approximation of one quadrant's white set in local cell coordinates
std::vector<Point> quadrant_polygon(const Quadrant& q, double r) {
    double m00 = q.ax * q.ax + q.ay * q.ay;
    double m01 = q.ax * q.bx + q.ay * q.by;
    double m11 = q.bx * q.bx + q.by * q.by;
    double b0 = q.ax * q.cx + q.ay * q.cy;
    double b1 = q.bx * q.cx + q.by * q.cy;
    double k = q.cx * q.cx + q.cy * q.cy - r * r;
    double det = m00 * m11 - m01 * m01;
    double tr = m00 + m11;
    if (det > 1e-14 * tr * tr) {
        double i00 = m11 / det, i01 = -m01 / det, i11 = m00 / det;
        double z0x = -(i00 * b0 + i01 * b1);
        double z0y = -(i01 * b0 + i11 * b1);
        double rho = b0 * (i00 * b0 + i01 * b1) + b1 * (i01 * b0 + i11 * b1) - k;
        if (rho < 0.0) return {};
        // principal axes of {u^T M u <= rho}
        double gap = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
        double l1 = tr / 2.0 + gap, l2 = std::max(tr / 2.0 - gap, 1e-300);
        double v1x, v1y;
        if (std::abs(m01) > 1e-300) {
            v1x = l1 - m11;
            v1y = m01;
        } else {
            v1x = m00 >= m11 ? 1.0 : 0.0;
            v1y = m00 >= m11 ? 0.0 : 1.0;
        }
        double n1 = std::hypot(v1x, v1y);
        v1x /= n1;
        v1y /= n1;
        double a = std::sqrt(rho / l1), b = std::sqrt(rho / l2);
        std::vector<Point> poly;
        const int N = 64;
        poly.reserve(N);
        for (int i = 0; i < N; ++i) {
            double th = 2.0 * M_PI * i / N;
            double u = a * std::cos(th), v = b * std::sin(th);
            poly.push_back({z0x + v1x * u - v1y * v, z0y + v1y * u + v1x * v});
        }
        return clip_rect(std::move(poly), q.x0, q.y0, q.x1, q.y1);
    }
    // degenerate map: white set is a band (or everything) within the rect
    double span = std::hypot(q.x1 - q.x0, q.y1 - q.y0) * 4.0;
    double c0n = std::hypot(q.ax, q.ay), c1n = std::hypot(q.bx, q.by);
    if (c0n < 1e-14 && c1n < 1e-14) {
        if (k <= 0.0)
            return {{q.x0, q.y0}, {q.x1, q.y0}, {q.x1, q.y1}, {q.x0, q.y1}};
        return {};
    }
    bool base_x = c0n >= c1n;
    double base2 = base_x ? m00 : m11;
    double kap = (q.ax * q.bx + q.ay * q.by) / base2;
    double bc = base_x ? b0 : b1;
    double disc = bc * bc - base2 * k;
    if (disc < 0.0) return {};
    double sq = std::sqrt(disc);
    double t1 = (-bc - sq) / base2, t2 = (-bc + sq) / base2;
    // band t1 <= tau <= t2 where tau = x + kap*y (base_x) or y + kap*x
    double cx = (q.x0 + q.x1) / 2, cy = (q.y0 + q.y1) / 2;
    std::vector<Point> poly;
    if (base_x) {
        // lines x = tau - kap*y
        poly = {{t1 - kap * (cy - span), cy - span},
                {t2 - kap * (cy - span), cy - span},
                {t2 - kap * (cy + span), cy + span},
                {t1 - kap * (cy + span), cy + span}};
    } else {
        poly = {{cx - span, t1 - kap * (cx - span)},
                {cx - span, t2 - kap * (cx - span)},
                {cx + span, t2 - kap * (cx + span)},
                {cx + span, t1 - kap * (cx + span)}};
    }
    return clip_rect(std::move(poly), q.x0, q.y0, q.x1, q.y1);
}

}  // namespace

std::vector<std::vector<Point>> white_region_polygons(const FreeSpaceDiagram& fsd) {
    std::vector<std::vector<Point>> out;
    for (const AggregatedCell& c : fsd.cells()) {
        for (const Quadrant& q : c.geom.quadrants()) {
            auto poly = quadrant_polygon(q, fsd.config().threshold);
            if (poly.size() < 3) continue;
            for (Point& p : poly) {
                p.x += c.x0;
                p.y += c.y0;
            }
            out.push_back(std::move(poly));
        }
    }
    return out;
}

bool point_in_polygon(const std::vector<Point>& poly, Point p) {
    bool in = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        if ((poly[i].y > p.y) != (poly[j].y > p.y)) {
            double xint = poly[j].x + (p.y - poly[j].y) / (poly[i].y - poly[j].y) *
                                          (poly[i].x - poly[j].x);
            if (p.x < xint) in = !in;
        }
    }
    return in;
}

std::string render_free_space_svg(const FreeSpaceDiagram& fsd, int canvas) {
    const double W = fsd.width(), H = fsd.height();
    const double scale = canvas / std::max({W, H, 1e-12});
    const double margin = 40.0;
    auto X = [&](double x) { return margin + x * scale; };
    auto Y = [&](double y) { return margin + (H - y) * scale; };

    std::string s;
    double cw = 2 * margin + W * scale, ch = 2 * margin + H * scale;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(cw) +
         "\" height=\"" + format_double(ch) + "\">\n";
    s += "<rect x=\"" + format_double(X(0)) + "\" y=\"" + format_double(Y(H)) + "\" width=\"" +
         format_double(W * scale) + "\" height=\"" + format_double(H * scale) +
         "\" fill=\"#222\" stroke=\"black\"/>\n";
    for (const AggregatedCell& c : fsd.cells()) {
        s += "<rect x=\"" + format_double(X(c.x0)) + "\" y=\"" +
             format_double(Y(c.y0 + c.geom.height())) + "\" width=\"" +
             format_double(c.geom.width() * scale) + "\" height=\"" +
             format_double(c.geom.height() * scale) +
             "\" fill=\"none\" stroke=\"#555\" stroke-width=\"0.5\"/>\n";
    }
    for (const auto& poly : white_region_polygons(fsd)) {
        s += "<polygon points=\"";
        for (const Point& p : poly)
            s += format_double(X(p.x)) + "," + format_double(Y(p.y)) + " ";
        s += "\" fill=\"white\" stroke=\"none\"/>\n";
    }
    for (const CriticalPoint& p : extract_boundary_critical_points(fsd)) {
        s += "<circle cx=\"" + format_double(X(p.x)) + "\" cy=\"" + format_double(Y(p.y)) +
             "\" r=\"1.5\" fill=\"#d33\"/>\n";
    }
    // axes labels
    s += "<text x=\"" + format_double(X(W / 2)) + "\" y=\"" + format_double(ch - 8) +
         "\" font-size=\"12\" text-anchor=\"middle\">arc length 0.." + format_double(W) +
         "</text>\n";
    s += "<text x=\"12\" y=\"" + format_double(Y(H / 2)) +
         "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 12 " +
         format_double(Y(H / 2)) + ")\">arc length 0.." + format_double(H) + "</text>\n";
    s += "</svg>\n";
    return s;
}

}  // namespace subtraj
