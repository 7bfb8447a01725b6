#include "subtraj/free_space.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

namespace subtraj {

namespace {

struct AxisPieces {
    // piecewise-linear local map x -> chord arc, one or two pieces split at w
    double w, width;
    double slope0, slope1;
    double const0, const1;  // chord arc at x within piece i is const_i + slope_i * x
    Point u, dir;           // simplified segment start and unit direction
};

AxisPieces axis_pieces(const SimplificationMap& m, std::size_t seg) {
    const PieceMap& pm = m.pieces()[seg];
    Segment s = m.segment(seg);
    AxisPieces a;
    a.width = pm.sub_len;
    a.w = std::clamp(pm.w_arc, 0.0, pm.sub_len);
    a.slope0 = a.w > 0.0 ? pm.uprime_arc / a.w : 0.0;
    double rest = pm.sub_len - a.w;
    a.slope1 = rest > 0.0 ? (pm.seg_len - pm.uprime_arc) / rest : 0.0;
    a.const0 = 0.0;
    a.const1 = pm.uprime_arc - a.slope1 * a.w;
    a.u = s.a;
    a.dir = (s.b - s.a) * (1.0 / pm.seg_len);
    return a;
}

// interval of {qa*t^2 + 2*qb*t + qc <= 0} intersected with [lo, hi]
std::optional<FreeInterval> quadratic_interval(double qa, double qb, double qc, double lo, double hi) {
    if (qa <= 0.0) {  // qa = |column|^2, zero only when the map ignores this axis
        if (qc <= 0.0) return FreeInterval{lo, hi};
        return std::nullopt;
    }
    double disc = qb * qb - qa * qc;
    if (disc < 0.0) return std::nullopt;
    double sq = std::sqrt(disc);
    double t1 = (-qb - sq) / qa;
    double t2 = (-qb + sq) / qa;
    double a = std::max(t1, lo);
    double b = std::min(t2, hi);
    if (a > b) return std::nullopt;
    return FreeInterval{a, b};
}

std::optional<FreeInterval> quad_vertical(const Quadrant& q, double x, double r) {
    double u0 = q.ax * x + q.cx;
    double v0 = q.ay * x + q.cy;
    double qa = q.bx * q.bx + q.by * q.by;
    double qb = u0 * q.bx + v0 * q.by;
    double qc = u0 * u0 + v0 * v0 - r * r;
    return quadratic_interval(qa, qb, qc, q.y0, q.y1);
}

std::optional<FreeInterval> quad_horizontal(const Quadrant& q, double y, double r) {
    double u0 = q.bx * y + q.cx;
    double v0 = q.by * y + q.cy;
    double qa = q.ax * q.ax + q.ay * q.ay;
    double qb = u0 * q.ax + v0 * q.ay;
    double qc = u0 * u0 + v0 * v0 - r * r;
    return quadratic_interval(qa, qb, qc, q.x0, q.x1);
}

std::optional<FreeInterval> merge(std::optional<FreeInterval> a, std::optional<FreeInterval> b) {
    if (!a) return b;
    if (!b) return a;
    return FreeInterval{std::min(a->lo, b->lo), std::max(a->hi, b->hi)};
}

}  // namespace

CellGeometry::CellGeometry(const SimplificationMap& pm, const SimplificationMap& qm,
                           std::size_t col, std::size_t row, double threshold)
    : threshold_(threshold) {
    AxisPieces px = axis_pieces(pm, col);
    AxisPieces py = axis_pieces(qm, row);
    width_ = px.width;
    height_ = py.width;
    wx_ = px.w;
    wy_ = py.w;

    auto add = [&](int qx, int qy) {
        double x0 = qx == 0 ? 0.0 : px.w;
        double x1 = qx == 0 ? px.w : px.width;
        double y0 = qy == 0 ? 0.0 : py.w;
        double y1 = qy == 0 ? py.w : py.width;
        if (x1 - x0 <= 0.0 || y1 - y0 <= 0.0) return;
        double sx = qx == 0 ? px.slope0 : px.slope1;
        double sy = qy == 0 ? py.slope0 : py.slope1;
        double cxp = qx == 0 ? px.const0 : px.const1;
        double cyp = qy == 0 ? py.const0 : py.const1;
        Quadrant q;
        q.x0 = x0; q.x1 = x1; q.y0 = y0; q.y1 = y1;
        q.ax = px.dir.x * sx;
        q.ay = px.dir.y * sx;
        q.bx = -py.dir.x * sy;
        q.by = -py.dir.y * sy;
        q.cx = (px.u.x + px.dir.x * cxp) - (py.u.x + py.dir.x * cyp);
        q.cy = (px.u.y + px.dir.y * cxp) - (py.u.y + py.dir.y * cyp);
        quads_.push_back(q);
    };
    for (int qx = 0; qx < 2; ++qx)
        for (int qy = 0; qy < 2; ++qy) add(qx, qy);
}

const Quadrant& CellGeometry::quad_at(double x, double y) const {
    for (const Quadrant& q : quads_)
        if (q.contains(x, y)) return q;
    // fall back to the nearest quadrant (points marginally outside the rect)
    double best = std::numeric_limits<double>::infinity();
    const Quadrant* pick = &quads_.front();
    for (const Quadrant& q : quads_) {
        double dx = std::max({q.x0 - x, 0.0, x - q.x1});
        double dy = std::max({q.y0 - y, 0.0, y - q.y1});
        if (dx * dx + dy * dy < best) {
            best = dx * dx + dy * dy;
            pick = &q;
        }
    }
    return *pick;
}

bool CellGeometry::white(double x, double y) const {
    x = std::clamp(x, 0.0, width_);
    y = std::clamp(y, 0.0, height_);
    const Quadrant& q = quad_at(x, y);
    return q.norm2_at(x, y) <= threshold_ * threshold_;
}

double CellGeometry::displacement_norm(double x, double y) const {
    x = std::clamp(x, 0.0, width_);
    y = std::clamp(y, 0.0, height_);
    return std::sqrt(quad_at(x, y).norm2_at(x, y));
}

std::optional<FreeInterval> CellGeometry::vertical_interval(double x) const {
    x = std::clamp(x, 0.0, width_);
    std::optional<FreeInterval> out;
    for (const Quadrant& q : quads_) {
        if (x < q.x0 || x > q.x1) continue;
        out = merge(out, quad_vertical(q, x, threshold_));
    }
    return out;
}

std::optional<FreeInterval> CellGeometry::horizontal_interval(double y) const {
    y = std::clamp(y, 0.0, height_);
    std::optional<FreeInterval> out;
    for (const Quadrant& q : quads_) {
        if (y < q.y0 || y > q.y1) continue;
        out = merge(out, quad_horizontal(q, y, threshold_));
    }
    return out;
}

CellGeometry::Extremes CellGeometry::extremes() const {
    std::vector<Point> cand;
    const double r = threshold_;
    for (const Quadrant& q : quads_) {
        // edge interval endpoints
        if (auto iv = quad_vertical(q, q.x0, r)) {
            cand.push_back({q.x0, iv->lo});
            cand.push_back({q.x0, iv->hi});
        }
        if (auto iv = quad_vertical(q, q.x1, r)) {
            cand.push_back({q.x1, iv->lo});
            cand.push_back({q.x1, iv->hi});
        }
        if (auto iv = quad_horizontal(q, q.y0, r)) {
            cand.push_back({iv->lo, q.y0});
            cand.push_back({iv->hi, q.y0});
        }
        if (auto iv = quad_horizontal(q, q.y1, r)) {
            cand.push_back({iv->lo, q.y1});
            cand.push_back({iv->hi, q.y1});
        }
        // interior extreme points of the (possibly clipped-away) ellipse
        double m00 = q.ax * q.ax + q.ay * q.ay;
        double m01 = q.ax * q.bx + q.ay * q.by;
        double m11 = q.bx * q.bx + q.by * q.by;
        double b0 = q.ax * q.cx + q.ay * q.cy;
        double b1 = q.bx * q.cx + q.by * q.cy;
        double k = q.cx * q.cx + q.cy * q.cy - r * r;
        double det = m00 * m11 - m01 * m01;
        double scale = (m00 + m11) * (m00 + m11);
        if (det <= 1e-14 * scale) continue;
        double i00 = m11 / det, i01 = -m01 / det, i11 = m00 / det;
        double z0x = -(i00 * b0 + i01 * b1);
        double z0y = -(i01 * b0 + i11 * b1);
        double rho = b0 * (i00 * b0 + i01 * b1) + b1 * (i01 * b0 + i11 * b1) - k;
        if (rho < 0.0) continue;
        double ex = std::sqrt(rho * i00);
        double ey = std::sqrt(rho * i11);
        Point pts[4] = {
            {z0x - ex, z0y - (ex > 0.0 ? i01 * std::sqrt(rho / i00) : 0.0)},
            {z0x + ex, z0y + (ex > 0.0 ? i01 * std::sqrt(rho / i00) : 0.0)},
            {z0x - (ey > 0.0 ? i01 * std::sqrt(rho / i11) : 0.0), z0y - ey},
            {z0x + (ey > 0.0 ? i01 * std::sqrt(rho / i11) : 0.0), z0y + ey},
        };
        const double tol = 1e-12 * std::max({1.0, width_, height_});
        for (const Point& p : pts)
            if (p.x >= q.x0 - tol && p.x <= q.x1 + tol && p.y >= q.y0 - tol && p.y <= q.y1 + tol)
                cand.push_back({std::clamp(p.x, q.x0, q.x1), std::clamp(p.y, q.y0, q.y1)});
    }
    if (cand.empty()) throw std::logic_error("extremes: empty cell");

    auto better = [](const Point& a, const Point& b, int dir) {
        // dir: 0 min-x, 1 max-x, 2 min-y, 3 max-y; ties toward smaller y then x
        double ka = dir == 0 ? a.x : dir == 1 ? -a.x : dir == 2 ? a.y : -a.y;
        double kb = dir == 0 ? b.x : dir == 1 ? -b.x : dir == 2 ? b.y : -b.y;
        if (ka != kb) return ka < kb;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    };
    Extremes e{cand[0], cand[0], cand[0], cand[0]};
    for (const Point& p : cand) {
        if (better(p, e.leftmost, 0)) e.leftmost = p;
        if (better(p, e.rightmost, 1)) e.rightmost = p;
        if (better(p, e.lowest, 2)) e.lowest = p;
        if (better(p, e.highest, 3)) e.highest = p;
    }
    return e;
}

// ------------------------------------------------------------- near pairs

namespace {

struct GridKeyHash {
    std::size_t operator()(std::uint64_t k) const {
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        return static_cast<std::size_t>(k);
    }
};

std::uint64_t grid_key(std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(cx) << 32) ^ (static_cast<std::uint64_t>(cy) & 0xffffffffULL);
}

// exact slab walk: every grid cell the segment passes through
template <typename F>
void for_segment_cells(const Segment& s, double r, F&& fn) {
    double xmin = std::min(s.a.x, s.b.x), xmax = std::max(s.a.x, s.b.x);
    auto cx0 = static_cast<std::int64_t>(std::floor(xmin / r));
    auto cx1 = static_cast<std::int64_t>(std::floor(xmax / r));
    double dx = s.b.x - s.a.x;
    for (std::int64_t cx = cx0; cx <= cx1; ++cx) {
        double xlo = std::max(xmin, static_cast<double>(cx) * r);
        double xhi = std::min(xmax, static_cast<double>(cx + 1) * r);
        double ylo, yhi;
        if (std::abs(dx) < 1e-300) {
            ylo = std::min(s.a.y, s.b.y);
            yhi = std::max(s.a.y, s.b.y);
        } else {
            double t0 = (xlo - s.a.x) / dx;
            double t1 = (xhi - s.a.x) / dx;
            double y0 = s.a.y + t0 * (s.b.y - s.a.y);
            double y1 = s.a.y + t1 * (s.b.y - s.a.y);
            ylo = std::min(y0, y1);
            yhi = std::max(y0, y1);
        }
        auto cy0 = static_cast<std::int64_t>(std::floor(ylo / r));
        auto cy1 = static_cast<std::int64_t>(std::floor(yhi / r));
        for (std::int64_t cy = cy0; cy <= cy1; ++cy) fn(cx, cy);
    }
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> near_segment_pairs(
    const std::vector<Segment>& psegs, const std::vector<Segment>& qsegs, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("near_segment_pairs: r must be positive");
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>, GridKeyHash> grid;
    for (std::size_t i = 0; i < psegs.size(); ++i)
        for_segment_cells(psegs[i], r, [&](std::int64_t cx, std::int64_t cy) {
            grid[grid_key(cx, cy)].push_back(static_cast<std::uint32_t>(i));
        });

    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::vector<std::uint32_t> stamp(psegs.size(), 0);
    std::uint32_t epoch = 0;
    for (std::size_t j = 0; j < qsegs.size(); ++j) {
        ++epoch;
        for_segment_cells(qsegs[j], r, [&](std::int64_t cx, std::int64_t cy) {
            for (std::int64_t ax = cx - 1; ax <= cx + 1; ++ax)
                for (std::int64_t ay = cy - 1; ay <= cy + 1; ++ay) {
                    auto it = grid.find(grid_key(ax, ay));
                    if (it == grid.end()) continue;
                    for (std::uint32_t i : it->second) {
                        if (stamp[i] == epoch) continue;
                        stamp[i] = epoch;
                        if (segment_segment_distance(psegs[i], qsegs[j]) <= r)
                            out.emplace_back(i, j);
                    }
                }
        });
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<CellGeometry> build_cell(const SimplificationMap& pm, const SimplificationMap& qm,
                                       std::size_t col, std::size_t row,
                                       const FreeSpaceConfig& cfg) {
    if (col >= pm.segment_count() || row >= qm.segment_count())
        throw std::invalid_argument("build_cell: segment index out of range");
    if (segment_segment_distance(pm.segment(col), qm.segment(row)) > cfg.threshold)
        return std::nullopt;
    return CellGeometry(pm, qm, col, row, cfg.threshold);
}

// --------------------------------------------------------------- diagram

FreeSpaceDiagram::FreeSpaceDiagram(FreeSpaceConfig cfg, SimplificationMap p_map,
                                   SimplificationMap q_map, std::vector<AggregatedCell> cells)
    : cfg_(cfg), p_map_(std::move(p_map)), q_map_(std::move(q_map)), cells_(std::move(cells)) {
    std::sort(cells_.begin(), cells_.end(), [](const AggregatedCell& a, const AggregatedCell& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    col_order_.resize(cells_.size());
    for (std::size_t i = 0; i < cells_.size(); ++i) col_order_[i] = static_cast<int>(i);
    std::sort(col_order_.begin(), col_order_.end(), [&](int a, int b) {
        return cells_[a].col != cells_[b].col ? cells_[a].col < cells_[b].col
                                              : cells_[a].row < cells_[b].row;
    });

    row_start_.assign(row_count() + 1, 0);
    for (const AggregatedCell& c : cells_) ++row_start_[c.row + 1];
    for (std::size_t i = 1; i < row_start_.size(); ++i) row_start_[i] += row_start_[i - 1];
    col_start_.assign(column_count() + 1, 0);
    for (const AggregatedCell& c : cells_) ++col_start_[c.col + 1];
    for (std::size_t i = 1; i < col_start_.size(); ++i) col_start_[i] += col_start_[i - 1];

    // neighbor links: nearest non-empty cell in the row / column
    for (std::size_t i = 0; i + 1 < cells_.size(); ++i) {
        if (cells_[i].row == cells_[i + 1].row) {
            cells_[i].right = static_cast<int>(i + 1);
            cells_[i + 1].left = static_cast<int>(i);
        }
    }
    for (std::size_t i = 0; i + 1 < col_order_.size(); ++i) {
        int a = col_order_[i], b = col_order_[i + 1];
        if (cells_[a].col == cells_[b].col) {
            cells_[a].up = b;
            cells_[b].down = a;
        }
    }
}

std::pair<std::size_t, std::size_t> FreeSpaceDiagram::row_span(int row) const {
    return {row_start_[row], row_start_[row + 1]};
}

std::pair<std::size_t, std::size_t> FreeSpaceDiagram::col_span(int col) const {
    return {col_start_[col], col_start_[col + 1]};
}

int FreeSpaceDiagram::cell_at(int row, int col) const {
    auto [lo, hi] = row_span(row);
    auto it = std::lower_bound(cells_.begin() + lo, cells_.begin() + hi, col,
                               [](const AggregatedCell& c, int v) { return c.col < v; });
    if (it == cells_.begin() + hi || it->col != col) return -1;
    return static_cast<int>(it - cells_.begin());
}

bool FreeSpaceDiagram::is_white(double x, double y) const {
    return displacement(x, y) <= cfg_.threshold;
}

double FreeSpaceDiagram::displacement(double x, double y) const {
    return dist(p_map_.map_point(x), q_map_.map_point(y));
}

std::optional<FreeInterval> FreeSpaceDiagram::vertical_interval(int cell, double x) const {
    const AggregatedCell& c = cells_[cell];
    double lx = x - c.x0;
    const double tol = kRelTol * std::max(1.0, width());
    if (lx < -tol || lx > c.geom.width() + tol)
        throw std::invalid_argument("vertical_interval: line outside cell");
    auto iv = c.geom.vertical_interval(lx);
    if (!iv) return std::nullopt;
    return FreeInterval{iv->lo + c.y0, iv->hi + c.y0};
}

std::optional<FreeInterval> FreeSpaceDiagram::horizontal_interval(int cell, double y) const {
    const AggregatedCell& c = cells_[cell];
    double ly = y - c.y0;
    const double tol = kRelTol * std::max(1.0, height());
    if (ly < -tol || ly > c.geom.height() + tol)
        throw std::invalid_argument("horizontal_interval: line outside cell");
    auto iv = c.geom.horizontal_interval(ly);
    if (!iv) return std::nullopt;
    return FreeInterval{iv->lo + c.x0, iv->hi + c.x0};
}

int FreeSpaceDiagram::column_of(double x) const {
    return static_cast<int>(p_map_.segment_of(x));
}

int FreeSpaceDiagram::row_of(double y) const {
    return static_cast<int>(q_map_.segment_of(y));
}

std::vector<std::pair<int, FreeInterval>> FreeSpaceDiagram::vertical_line_intervals(double x) const {
    std::vector<std::pair<int, FreeInterval>> out;
    int col = column_of(x);
    auto [lo, hi] = col_span(col);
    for (std::size_t k = lo; k < hi; ++k) {
        int ci = col_order_[k];
        if (auto iv = vertical_interval(ci, x)) out.emplace_back(ci, *iv);
    }
    return out;
}

FreeSpaceDiagram build_diagram(const Trajectory& p, const Trajectory& q,
                               const FreeSpaceConfig& cfg, BuildTimings* timings) {
    using clock = std::chrono::steady_clock;
    auto ms = [](clock::time_point a, clock::time_point b) {
        return std::chrono::duration<double, std::milli>(b - a).count();
    };
    auto t0 = clock::now();
    SimplificationMap pm = build_map(simplify_curve(p, cfg.mu()));
    SimplificationMap qm = build_map(simplify_curve(q, cfg.mu()));
    auto t1 = clock::now();

    std::vector<Segment> psegs, qsegs;
    psegs.reserve(pm.segment_count());
    for (std::size_t i = 0; i < pm.segment_count(); ++i) psegs.push_back(pm.segment(i));
    qsegs.reserve(qm.segment_count());
    for (std::size_t i = 0; i < qm.segment_count(); ++i) qsegs.push_back(qm.segment(i));

    auto pairs = near_segment_pairs(psegs, qsegs, cfg.threshold);
    auto t2 = clock::now();

    std::vector<AggregatedCell> cells;
    cells.reserve(pairs.size());
    for (auto [i, j] : pairs) {
        auto geom = build_cell(pm, qm, i, j, cfg);
        if (!geom) continue;
        cells.push_back(AggregatedCell{static_cast<int>(j), static_cast<int>(i),
                                       pm.segment_source_lo(i), qm.segment_source_lo(j),
                                       std::move(*geom)});
    }
    auto t3 = clock::now();
    if (timings) {
        timings->ms_simplify = ms(t0, t1);
        timings->ms_pairs = ms(t1, t2);
        timings->ms_cells = ms(t2, t3);
    }
    return FreeSpaceDiagram(cfg, std::move(pm), std::move(qm), std::move(cells));
}

}  // namespace subtraj
