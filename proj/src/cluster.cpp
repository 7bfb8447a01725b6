#include "subtraj/cluster.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace subtraj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double now_ms() {
    using namespace std::chrono;
    return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

}  // namespace

std::vector<Window> windows_vertex(const Trajectory& t, double l) {
    if (!(l > 0.0)) throw std::invalid_argument("windows_vertex: l must be positive");
    std::vector<Window> out;
    const auto& pre = t.prefix_lengths();
    for (std::size_t i = 0; i < pre.size(); ++i) {
        auto it = std::lower_bound(pre.begin(), pre.end(), pre[i] + l);
        if (it == pre.end()) break;
        out.push_back({pre[i], *it});
    }
    return out;
}

// ------------------------------------------------------- internal critical points

namespace {

// 2x2 SPD square root of M^{-1} scaled by sqrt(rho): ellipse axes for the set
// {u : u^T M u = rho}
bool ellipse_param(double m00, double m01, double m11, double rho, double out[4]) {
    double tr = m00 + m11;
    double det = m00 * m11 - m01 * m01;
    if (det <= 1e-14 * tr * tr || rho < 0.0) return false;
    double gap = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    double l1 = tr / 2.0 + gap, l2 = tr / 2.0 - gap;  // eigenvalues of M
    // eigenvectors
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
    double v2x = -v1y, v2y = v1x;
    double a = std::sqrt(rho / l1), b = std::sqrt(rho / l2);
    out[0] = v1x * a;
    out[1] = v1y * a;
    out[2] = v2x * b;
    out[3] = v2y * b;
    return true;
}

struct QuadCurve {
    // boundary of the white set of one quadrant, in global coordinates
    const Quadrant* q;
    double ox, oy;  // cell origin
    double r;

    double value(double gx, double gy) const {
        double u = q->hx(gx - ox, gy - oy);
        double v = q->hy(gx - ox, gy - oy);
        return u * u + v * v - r * r;
    }
    bool in_rect(double gx, double gy, double tol) const {
        double lx = gx - ox, ly = gy - oy;
        return lx >= q->x0 - tol && lx <= q->x1 + tol && ly >= q->y0 - tol && ly <= q->y1 + tol;
    }
};

// sample the boundary curve of a quadrant's white set as polyline chunks in
// global coordinates; used for pairwise intersection under an x-shift
std::vector<std::vector<Point>> boundary_samples(const QuadCurve& c, int n) {
    std::vector<std::vector<Point>> chunks;
    const Quadrant& q = *c.q;
    double m00 = q.ax * q.ax + q.ay * q.ay;
    double m01 = q.ax * q.bx + q.ay * q.by;
    double m11 = q.bx * q.bx + q.by * q.by;
    double b0 = q.ax * q.cx + q.ay * q.cy;
    double b1 = q.bx * q.cx + q.by * q.cy;
    double k = q.cx * q.cx + q.cy * q.cy - c.r * c.r;
    double det = m00 * m11 - m01 * m01;
    double tr = m00 + m11;
    if (det > 1e-14 * tr * tr) {
        double i00 = m11 / det, i01 = -m01 / det, i11 = m00 / det;
        double z0x = -(i00 * b0 + i01 * b1);
        double z0y = -(i01 * b0 + i11 * b1);
        double rho = b0 * (i00 * b0 + i01 * b1) + b1 * (i01 * b0 + i11 * b1) - k;
        double axes[4];
        if (!ellipse_param(m00, m01, m11, rho, axes)) return chunks;
        std::vector<Point> chunk;
        chunk.reserve(n + 1);
        for (int i = 0; i <= n; ++i) {
            double th = 2.0 * M_PI * i / n;
            double lx = z0x + axes[0] * std::cos(th) + axes[2] * std::sin(th);
            double ly = z0y + axes[1] * std::cos(th) + axes[3] * std::sin(th);
            chunk.push_back({lx + c.ox, ly + c.oy});
        }
        chunks.push_back(std::move(chunk));
        return chunks;
    }
    // rank-deficient map: the boundary is one or two parallel lines
    double c0n = std::hypot(q.ax, q.ay);
    double c1n = std::hypot(q.bx, q.by);
    if (c0n < 1e-14 && c1n < 1e-14) return chunks;
    bool base_x = c0n >= c1n;
    double base2 = base_x ? m00 : m11;
    double kappa = (q.ax * q.bx + q.ay * q.by) / base2;
    // tau = x + kappa*y (base x) or y + kappa*x; |base|^2 tau^2 + 2(base.c)tau + |c|^2 - r^2 = 0
    double bc = base_x ? (q.ax * q.cx + q.ay * q.cy) : (q.bx * q.cx + q.by * q.cy);
    double cc = q.cx * q.cx + q.cy * q.cy - c.r * c.r;
    double disc = bc * bc - base2 * cc;
    if (disc < 0.0) return chunks;
    double sq = std::sqrt(disc);
    for (double tau : {(-bc - sq) / base2, (-bc + sq) / base2}) {
        // clip the line (x + kappa y = tau or y + kappa x = tau) to the rect
        std::vector<Point> chunk;
        for (int i = 0; i <= n; ++i) {
            double f = static_cast<double>(i) / n;
            double lx, ly;
            if (base_x) {
                ly = q.y0 + f * (q.y1 - q.y0);
                lx = tau - kappa * ly;
            } else {
                lx = q.x0 + f * (q.x1 - q.x0);
                ly = tau - kappa * lx;
            }
            chunk.push_back({lx + c.ox, ly + c.oy});
        }
        chunks.push_back(std::move(chunk));
        if (disc == 0.0) break;
    }
    return chunks;
}

}  // namespace

std::vector<InternalCriticalPoint> internal_critical_points(const FreeSpaceDiagram& fsd, double l) {
    if (!(l > 0.0)) throw std::invalid_argument("internal_critical_points: l must be positive");
    using Kind = InternalCriticalPoint::Kind;
    std::vector<InternalCriticalPoint> out;
    const double thr = fsd.config().threshold;
    const double scale = std::max({1.0, fsd.width(), fsd.height()});
    const double tol = 1e-9 * scale;

    // boundary critical points
    auto bpts = extract_boundary_critical_points(fsd);
    for (const auto& p : bpts) out.push_back({p.x, p.y, Kind::boundary});

    // end-of-cell points and per-cell white y-spans
    std::vector<CellGeometry::Extremes> exts;
    exts.reserve(fsd.cell_count());
    for (const AggregatedCell& c : fsd.cells()) {
        auto e = c.geom.extremes();
        exts.push_back(e);
        out.push_back({c.x0 + e.leftmost.x, c.y0 + e.leftmost.y, Kind::end_of_cell});
        out.push_back({c.x0 + e.rightmost.x, c.y0 + e.rightmost.y, Kind::end_of_cell});
    }

    // row interval trees over the white y-spans
    std::vector<IntervalTree> row_trees(fsd.row_count());
    std::vector<std::vector<int>> row_cells(fsd.row_count());
    for (std::size_t r = 0; r < fsd.row_count(); ++r) {
        auto [lo, hi] = fsd.row_span(static_cast<int>(r));
        std::vector<std::pair<double, double>> spans;
        for (std::size_t i = lo; i < hi; ++i) {
            const AggregatedCell& c = fsd.cells()[i];
            spans.emplace_back(c.y0 + exts[i].lowest.y, c.y0 + exts[i].highest.y);
            row_cells[r].push_back(static_cast<int>(i));
        }
        row_trees[r] = IntervalTree(std::move(spans));
    }

    // propagated points: free-space boundary points sharing a y with a
    // critical point (seeds: boundary + end-of-cell points)
    std::size_t n_seeds = out.size();
    for (std::size_t si = 0; si < n_seeds; ++si) {
        double y = out[si].y;
        int r0 = fsd.row_of(y);
        for (int r : {r0, r0 - 1}) {
            if (r < 0 || r >= static_cast<int>(fsd.row_count())) continue;
            double rlo = fsd.q_map().segment_source_lo(r);
            double rhi = fsd.q_map().segment_source_hi(r);
            if (y < rlo - tol || y > rhi + tol) continue;
            for (std::size_t k : row_trees[r].stab(y)) {
                int ci = row_cells[r][k];
                auto iv = fsd.horizontal_interval(ci, y);
                if (!iv) continue;
                for (double x : {iv->lo, iv->hi}) {
                    double dd = dist(fsd.p_map().map_point(x), fsd.q_map().map_point(y));
                    if (std::abs(dd - thr) <= 1e-9 * thr)
                        out.push_back({x, y, Kind::propagated});
                }
            }
        }
    }

    // l-apart points: (x, y) on one boundary with (x + l, y) on another
    for (std::size_t r = 0; r < fsd.row_count(); ++r) {
        auto [lo, hi] = fsd.row_span(static_cast<int>(r));
        for (std::size_t i = lo; i < hi; ++i) {
            const AggregatedCell& c1 = fsd.cells()[i];
            double lo1 = c1.x0 + l, hi1 = c1.x0 + c1.geom.width() + l;
            for (std::size_t j = lo; j < hi; ++j) {
                const AggregatedCell& c2 = fsd.cells()[j];
                double lo2 = c2.x0, hi2 = c2.x0 + c2.geom.width();
                if (hi2 < lo1 - tol) continue;
                if (lo2 > hi1 + tol) break;
                for (const Quadrant& q1 : c1.geom.quadrants()) {
                    QuadCurve a{&q1, c1.x0, c1.y0, thr};
                    for (const Quadrant& q2 : c2.geom.quadrants()) {
                        QuadCurve b{&q2, c2.x0, c2.y0, thr};
                        for (const auto& chunk : boundary_samples(a, 128)) {
                            for (std::size_t s = 0; s + 1 < chunk.size(); ++s) {
                                double f0 = b.value(chunk[s].x + l, chunk[s].y);
                                double f1 = b.value(chunk[s + 1].x + l, chunk[s + 1].y);
                                if (f0 == 0.0) f0 = 1e-300;
                                if ((f0 < 0) == (f1 < 0)) continue;
                                Point pa = chunk[s], pb = chunk[s + 1];
                                for (int it = 0; it < 60; ++it) {
                                    Point mid{(pa.x + pb.x) / 2, (pa.y + pb.y) / 2};
                                    double fm = b.value(mid.x + l, mid.y);
                                    if ((fm < 0) == (f0 < 0)) pa = mid;
                                    else pb = mid;
                                }
                                Point hit{(pa.x + pb.x) / 2, (pa.y + pb.y) / 2};
                                if (!a.in_rect(hit.x, hit.y, tol)) continue;
                                if (!b.in_rect(hit.x + l, hit.y, tol)) continue;
                                out.push_back({hit.x, hit.y, Kind::l_apart});
                                out.push_back({hit.x + l, hit.y, Kind::l_apart});
                            }
                        }
                    }
                }
            }
        }
    }

    std::sort(out.begin(), out.end(), [](const InternalCriticalPoint& a, const InternalCriticalPoint& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    std::vector<InternalCriticalPoint> dedup;
    for (const auto& p : out) {
        if (!dedup.empty() && std::abs(dedup.back().x - p.x) <= tol &&
            std::abs(dedup.back().y - p.y) <= tol)
            continue;
        dedup.push_back(p);
    }
    return dedup;
}

// --------------------------------------------------------------- perturbation

namespace {

// coefficient signature (xx, xy, yy, x, y, 1) of one quadrant's boundary
// quadratic in global coordinates, optionally pre-shifted by +shift in x
std::array<double, 6> quad_signature(const Quadrant& q, double ox, double oy, double r,
                                     double shift) {
    double cpx = q.cx - q.ax * (ox - shift) - q.bx * oy;
    double cpy = q.cy - q.ay * (ox - shift) - q.by * oy;
    std::array<double, 6> s;
    s[0] = q.ax * q.ax + q.ay * q.ay;
    s[1] = 2.0 * (q.ax * q.bx + q.ay * q.by);
    s[2] = q.bx * q.bx + q.by * q.by;
    s[3] = 2.0 * (q.ax * cpx + q.ay * cpy);
    s[4] = 2.0 * (q.bx * cpx + q.by * cpy);
    s[5] = cpx * cpx + cpy * cpy - r * r;
    double n = 0.0;
    for (double v : s) n += v * v;
    n = std::sqrt(n);
    if (n == 0.0) return s;
    double sign = 1.0;
    for (double v : s)
        if (std::abs(v) > 1e-12 * n) { sign = v > 0 ? 1.0 : -1.0; break; }
    for (double& v : s) v = v * sign / n;
    return s;
}

bool coincident(const std::array<double, 6>& a, const std::array<double, 6>& b) {
    for (int i = 0; i < 6; ++i)
        if (std::abs(a[i] - b[i]) > 1e-9) return false;
    return true;
}

bool has_degenerate_pair(const FreeSpaceDiagram& fsd, double l) {
    const double thr = fsd.config().threshold;
    const double tol = 1e-9 * std::max({1.0, fsd.width(), fsd.height()});
    for (std::size_t r = 0; r < fsd.row_count(); ++r) {
        auto [lo, hi] = fsd.row_span(static_cast<int>(r));
        for (std::size_t i = lo; i < hi; ++i) {
            const AggregatedCell& c1 = fsd.cells()[i];
            double lo1 = c1.x0 + l, hi1 = c1.x0 + c1.geom.width() + l;
            for (std::size_t j = lo; j < hi; ++j) {
                const AggregatedCell& c2 = fsd.cells()[j];
                double lo2 = c2.x0, hi2 = c2.x0 + c2.geom.width();
                if (hi2 < lo1 - tol) continue;
                if (lo2 > hi1 + tol) break;
                for (const Quadrant& q1 : c1.geom.quadrants()) {
                    auto s1 = quad_signature(q1, c1.x0 + l, c1.y0, thr, 0.0);
                    for (const Quadrant& q2 : c2.geom.quadrants()) {
                        // y-windows must overlap for a shared arc to exist
                        double ylo = std::max(c1.y0 + q1.y0, c2.y0 + q2.y0);
                        double yhi = std::min(c1.y0 + q1.y1, c2.y0 + q2.y1);
                        if (ylo > yhi + tol) continue;
                        double xlo = std::max(c1.x0 + q1.x0 + l, c2.x0 + q2.x0);
                        double xhi = std::min(c1.x0 + q1.x1 + l, c2.x0 + q2.x1);
                        if (xlo > xhi + tol) continue;
                        auto s2 = quad_signature(q2, c2.x0, c2.y0, thr, 0.0);
                        if (coincident(s1, s2)) return true;
                    }
                }
            }
        }
    }
    return false;
}

}  // namespace

std::pair<double, bool> perturb_if_degenerate(const FreeSpaceDiagram& fsd, double l) {
    double delta = fsd.config().eps * fsd.config().eps * fsd.config().d;
    bool flagged = false;
    for (int attempt = 0; attempt < 4; ++attempt) {
        if (!has_degenerate_pair(fsd, l)) return {l, flagged};
        l += delta;
        flagged = true;
    }
    return {l, flagged};
}

// --------------------------------------------------------------- sweep state

SweepState::SweepState(const FreeSpaceDiagram& fsd, ReachabilityGraph& g) : fsd_(&fsd), g_(&g) {
    std::size_t slots = g.static_node_count();
    row_base_.resize(fsd.row_count());
    col_base_.resize(fsd.column_count());
    for (std::size_t r = 0; r < fsd.row_count(); ++r) {
        row_base_[r] = slots;
        slots += g.row_tree(static_cast<int>(r)).tree.nodes().size();
    }
    for (std::size_t c = 0; c < fsd.column_count(); ++c) {
        col_base_[c] = slots;
        slots += g.col_tree(static_cast<int>(c)).tree.nodes().size();
    }
    slots_ = slots;
    stamp_.assign(slots, 0);
    val_.assign(slots, kInf);
    dead_.assign(slots, 0);
}

void SweepState::set_window_line(double t) {
    if (t != t_) {
        t_ = t;
        ++epoch_;
    }
}

double SweepState::row_exit(const ReachabilityGraph::Run& run, int cell_index, double x_start,
                            double h) {
    int k = static_cast<int>(run.cells.size());
    if (cell_index >= k) return kInf;
    if (t_ < x_start || t_ > run.bx[k]) return kInf;
    // cell containing the line x = t within the run
    int ct = static_cast<int>(std::upper_bound(run.bx.begin(), run.bx.end(), t_) -
                              run.bx.begin()) - 1;
    ct = std::clamp(ct, cell_index, k - 1);
    for (int j = cell_index + 1; j <= ct; ++j) {
        if (h > run.iv[j]->hi) return kInf;
        h = std::max(h, run.iv[j]->lo);
    }
    auto iv = fsd_->vertical_interval(run.cells[ct], t_);
    if (!iv || h > iv->hi) return kInf;
    return std::max(h, iv->lo);
}

double SweepState::col_exit(const ReachabilityGraph::Run& run, int cell_index, double x_prof,
                            double y_start) {
    int k = static_cast<int>(run.cells.size());
    if (cell_index >= k) return kInf;
    int col = run.line;
    double clo = fsd_->p_map().segment_source_lo(col);
    double chi = fsd_->p_map().segment_source_hi(col);
    if (t_ < clo || t_ > chi) return kInf;
    if (x_prof > t_) return kInf;
    for (int idx = cell_index; idx < k; ++idx) {
        if (idx > cell_index) {
            if (x_prof > run.iv[idx]->hi) return kInf;
            x_prof = std::max(x_prof, run.iv[idx]->lo);
            if (x_prof > t_) return kInf;
        }
        auto iv = fsd_->vertical_interval(run.cells[idx], t_);
        if (iv) {
            double base = idx == cell_index ? y_start : fsd_->cells()[run.cells[idx]].y0;
            if (base <= iv->hi) return std::max(base, iv->lo);
        }
    }
    return kInf;
}

double SweepState::tree_value(bool row, int line, int tnode) {
    const ReachabilityGraph::LineTree& lt = row ? g_->row_tree(line) : g_->col_tree(line);
    std::size_t slot = (row ? row_base_[line] : col_base_[line]) + static_cast<std::size_t>(tnode);
    if (dead_[slot]) return kInf;
    if (stamp_[slot] == epoch_) return val_[slot];
    stamp_[slot] = epoch_;
    val_[slot] = kInf;
    const RangeTree::Node& nd = lt.tree.nodes()[tnode];
    double best;
    if (nd.hi - nd.lo == 1) {
        best = node_value(lt.leaves[nd.lo]);
    } else {
        best = std::min(tree_value(row, line, nd.left), tree_value(row, line, nd.right));
    }
    val_[slot] = best;
    if (best == kInf) dead_[slot] = 1;
    return best;
}

double SweepState::node_value(int id) {
    const auto& nd = g_->nodes()[id];
    bool memoize = !nd.greedy && static_cast<std::size_t>(id) < g_->static_node_count();
    std::size_t slot = static_cast<std::size_t>(id);
    if (memoize) {
        if (dead_[slot]) return kInf;
        if (stamp_[slot] == epoch_) return val_[slot];
        stamp_[slot] = epoch_;
        val_[slot] = kInf;
    }
    double best = kInf;
    const double tol = kRelTol * std::max(1.0, fsd_->width());
    if (std::abs(nd.x - t_) <= tol) {
        best = nd.y;
    } else if (nd.x < t_) {
        for (const auto& vr : nd.vroles) {
            const auto& run = g_->row_runs()[vr.run];
            best = std::min(best, row_exit(run, vr.boundary, nd.x, nd.y));
            if (vr.q >= 0) {
                double hi = std::min(g_->nodes()[vr.q].x, t_);
                const auto& lt = g_->row_tree(run.line);
                for (int tn : lt.tree.cover(nd.x, hi))
                    best = std::min(best, tree_value(true, run.line, tn));
            }
        }
        for (const auto& hr : nd.hroles) {
            const auto& run = g_->col_runs()[hr.run];
            best = std::min(best, col_exit(run, hr.boundary, nd.x, nd.y));
            if (hr.q >= 0) {
                double col_right = fsd_->p_map().segment_source_hi(run.line);
                if (col_right <= t_ + tol) {
                    const auto& lt = g_->col_tree(run.line);
                    for (int tn : lt.tree.cover(nd.y, g_->nodes()[hr.q].y))
                        best = std::min(best, tree_value(false, run.line, tn));
                }
            }
        }
        if (nd.greedy) {
            if (nd.g_row_run >= 0) {
                const auto& run = g_->row_runs()[nd.g_row_run];
                best = std::min(best, row_exit(run, nd.g_row_cell, nd.x, nd.y));
                if (nd.g_q_row >= 0) {
                    double hi = std::min(g_->nodes()[nd.g_q_row].x, t_);
                    const auto& lt = g_->row_tree(run.line);
                    for (int tn : lt.tree.cover(nd.x, hi))
                        best = std::min(best, tree_value(true, run.line, tn));
                }
            }
            if (nd.g_col_run >= 0) {
                const auto& run = g_->col_runs()[nd.g_col_run];
                best = std::min(best, col_exit(run, nd.g_col_cell, nd.x, nd.y));
                if (nd.g_q_col >= 0) {
                    double col_right = fsd_->p_map().segment_source_hi(run.line);
                    if (col_right <= t_ + tol) {
                        const auto& lt = g_->col_tree(run.line);
                        for (int tn : lt.tree.cover(nd.y, g_->nodes()[nd.g_q_col].y))
                            best = std::min(best, tree_value(false, run.line, tn));
                    }
                }
            }
        }
        ++expansions_;
    }
    if (memoize) {
        val_[slot] = best;
        if (best == kInf) dead_[slot] = 1;
    }
    return best;
}

double SweepState::lowest_end(Point p) {
    int id = g_->insert_greedy_point(p);
    double v = node_value(id);
    g_->remove_greedy_point(id);
    return v;
}

// ----------------------------------------------------------------- sweep

int count_disjoint_paths(const FreeSpaceDiagram& fsd, ReachabilityGraph& g, Window w, int cap,
                         SweepState& st, std::vector<std::pair<double, double>>* members) {
    if (w.t < w.s || w.s < 0.0 || w.t > fsd.width() * (1.0 + kRelTol))
        throw std::invalid_argument("count_disjoint_paths: invalid window");
    (void)g;
    if (cap <= 0) return 0;
    st.set_window_line(std::min(w.t, fsd.width()));
    auto intervals = fsd.vertical_line_intervals(w.s);
    int count = 0;

    // paths whose spans sit below the reference band
    double cursor = -kInf;
    for (const auto& [ci, iv] : intervals) {
        (void)ci;
        if (count >= cap) break;
        double start = std::max(iv.lo, cursor);
        while (count < cap && start <= iv.hi && start <= w.s) {
            double e = st.lowest_end({w.s, start});
            if (e > w.s) break;  // ends are monotone in the start height
            ++count;
            if (members) members->emplace_back(start, e);
            cursor = e;
            start = std::max(start, e);  // degenerate repeats saturate the cap
        }
    }

    // paths whose spans sit above the reference band
    cursor = w.t;
    for (const auto& [ci, iv] : intervals) {
        (void)ci;
        if (count >= cap) break;
        if (iv.hi < cursor) continue;
        double start = std::max(iv.lo, cursor);
        while (count < cap && start <= iv.hi) {
            double e = st.lowest_end({w.s, start});
            if (e == kInf) break;
            ++count;
            if (members) members->emplace_back(start, e);
            cursor = std::max(e, start);
            start = cursor;
        }
    }
    return count;
}

// ----------------------------------------------------------------- decide

DecideResult decide(const Trajectory& t, const ClusterQuery& q) {
    if (q.m < 1) throw std::invalid_argument("decide: m must be >= 1");
    if (!(q.l > 0.0)) throw std::invalid_argument("decide: l must be positive");
    FreeSpaceConfig cfg(q.d, q.eps);

    DecideResult res;
    res.stats.l_effective = q.l;
    if (q.l > t.length() * (1.0 + kRelTol)) return res;
    if (q.m == 1) {
        res.yes = true;
        res.witness = ClusterWitness{0.0, q.l, {}};
        return res;
    }

    BuildTimings bt;
    FreeSpaceDiagram fsd = build_diagram(t, t, cfg, &bt);
    double t1 = now_ms();
    ReachabilityGraph graph = ReachabilityGraph::build(fsd);
    double t2 = now_ms();

    res.stats.cells = fsd.cell_count();
    res.stats.graph_nodes = graph.static_node_count();
    res.stats.graph_edges = graph.edge_count();
    res.stats.ms_simplify = bt.ms_simplify;
    res.stats.ms_pairs = bt.ms_pairs;
    res.stats.ms_cells = bt.ms_cells;
    res.stats.ms_graph = t2 - t1;

    double t3 = now_ms();
    std::vector<Window> windows;
    double l_eff = q.l;
    if (q.mode == Mode::vertex) {
        windows = windows_vertex(t, q.l);
    } else {
        auto [l2, flag] = perturb_if_degenerate(fsd, q.l);
        l_eff = l2;
        res.stats.perturbed = flag;
        auto pts = internal_critical_points(fsd, l_eff);
        for (const auto& p : pts) {
            switch (p.kind) {
                case InternalCriticalPoint::Kind::boundary: ++res.stats.boundary_points; break;
                case InternalCriticalPoint::Kind::end_of_cell: ++res.stats.end_of_cell_points; break;
                case InternalCriticalPoint::Kind::propagated: ++res.stats.propagated_points; break;
                case InternalCriticalPoint::Kind::l_apart: ++res.stats.l_apart_points; break;
            }
        }
        double prev = -1.0;
        for (const auto& p : pts) {
            if (p.x <= prev) continue;
            prev = p.x;
            if (p.x + l_eff <= t.length() * (1.0 + kRelTol))
                windows.push_back({p.x, std::min(p.x + l_eff, t.length())});
        }
    }
    res.stats.l_effective = l_eff;
    res.stats.windows = windows.size();

    SweepState st(fsd, graph);
    for (const Window& w : windows) {
        std::vector<std::pair<double, double>> members;
        int cnt = count_disjoint_paths(fsd, graph, w, q.m - 1, st, &members);
        if (cnt >= q.m - 1) {
            res.yes = true;
            ClusterWitness wit;
            wit.ref_lo = w.s;
            wit.ref_hi = w.t;
            wit.members = std::move(members);
            res.witness = std::move(wit);
            break;
        }
    }
    res.stats.ms_sweep = now_ms() - t3;
    return res;
}

}  // namespace subtraj
