#include "subtraj/reachability.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace subtraj {

namespace {

double merge_tol(const FreeSpaceDiagram& fsd) {
    return 1e-9 * std::max({1.0, fsd.width(), fsd.height()});
}

}  // namespace

std::vector<CriticalPoint> extract_boundary_critical_points(const FreeSpaceDiagram& fsd) {
    std::vector<CriticalPoint> out;
    const auto& cells = fsd.cells();
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const AggregatedCell& c = cells[ci];
        double x0 = c.x0, x1 = c.x0 + c.geom.width();
        double y0 = c.y0, y1 = c.y0 + c.geom.height();
        using Side = CriticalPoint::Side;
        auto push_v = [&](double x, Side side) {
            if (auto iv = fsd.vertical_interval(static_cast<int>(ci), x)) {
                out.push_back({x, iv->lo, c.row, c.col, side, CritKind::boundary});
                out.push_back({x, iv->hi, c.row, c.col, side, CritKind::boundary});
            }
        };
        auto push_h = [&](double y, Side side) {
            if (auto iv = fsd.horizontal_interval(static_cast<int>(ci), y)) {
                out.push_back({iv->lo, y, c.row, c.col, side, CritKind::boundary});
                out.push_back({iv->hi, y, c.row, c.col, side, CritKind::boundary});
            }
        };
        push_v(x0, Side::left);
        push_v(x1, Side::right);
        push_h(y0, Side::bottom);
        push_h(y1, Side::top);
    }
    const double tol = merge_tol(fsd);
    std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    std::vector<CriticalPoint> dedup;
    for (const CriticalPoint& p : out) {
        if (!dedup.empty() && std::abs(dedup.back().x - p.x) <= tol &&
            std::abs(dedup.back().y - p.y) <= tol)
            continue;
        dedup.push_back(p);
    }
    return dedup;
}

// ------------------------------------------------------------------ build

namespace {

struct Cand {
    double x, y;
    bool is_v;
    int run, boundary;
};

}  // namespace

ReachabilityGraph ReachabilityGraph::build(const FreeSpaceDiagram& fsd) {
    ReachabilityGraph g;
    g.fsd_ = &fsd;
    const auto& cells = fsd.cells();
    g.cell_row_run_.assign(cells.size(), -1);
    g.cell_col_run_.assign(cells.size(), -1);

    // row runs: split where columns are not adjacent or the shared vertical
    // boundary has no white interval
    for (int r = 0; r < static_cast<int>(fsd.row_count()); ++r) {
        auto [lo, hi] = fsd.row_span(r);
        std::size_t i = lo;
        while (i < hi) {
            Run run;
            run.line = r;
            run.cells.push_back(static_cast<int>(i));
            run.bx.push_back(cells[i].x0);
            run.iv.push_back(fsd.vertical_interval(static_cast<int>(i), cells[i].x0));
            std::size_t j = i;
            while (j + 1 < hi && cells[j + 1].col == cells[j].col + 1) {
                double bx = cells[j].x0 + cells[j].geom.width();
                auto iv = fsd.vertical_interval(static_cast<int>(j), bx);
                if (!iv) break;
                run.bx.push_back(bx);
                run.iv.push_back(iv);
                ++j;
                run.cells.push_back(static_cast<int>(j));
            }
            double bx_end = cells[j].x0 + cells[j].geom.width();
            run.bx.push_back(bx_end);
            run.iv.push_back(fsd.vertical_interval(static_cast<int>(j), bx_end));
            for (int ci : run.cells) g.cell_row_run_[ci] = static_cast<int>(g.row_runs_.size());
            g.row_runs_.push_back(std::move(run));
            i = j + 1;
        }
    }

    // column runs, transposed
    for (int c = 0; c < static_cast<int>(fsd.column_count()); ++c) {
        auto [lo, hi] = fsd.col_span(c);
        std::size_t i = lo;
        while (i < hi) {
            Run run;
            run.line = c;
            int ci0 = fsd.col_order()[i];
            run.cells.push_back(ci0);
            run.bx.push_back(cells[ci0].y0);
            run.iv.push_back(fsd.horizontal_interval(ci0, cells[ci0].y0));
            std::size_t j = i;
            while (j + 1 < hi) {
                int cj = fsd.col_order()[j];
                int cn = fsd.col_order()[j + 1];
                if (cells[cn].row != cells[cj].row + 1) break;
                double by = cells[cj].y0 + cells[cj].geom.height();
                auto iv = fsd.horizontal_interval(cj, by);
                if (!iv) break;
                run.bx.push_back(by);
                run.iv.push_back(iv);
                ++j;
                run.cells.push_back(cn);
            }
            int cj = fsd.col_order()[j];
            double by_end = cells[cj].y0 + cells[cj].geom.height();
            run.bx.push_back(by_end);
            run.iv.push_back(fsd.horizontal_interval(cj, by_end));
            for (int cc : run.cells) g.cell_col_run_[cc] = static_cast<int>(g.col_runs_.size());
            g.col_runs_.push_back(std::move(run));
            i = j + 1;
        }
    }

    // node candidates from all boundary intervals
    std::vector<Cand> cands;
    for (std::size_t ri = 0; ri < g.row_runs_.size(); ++ri) {
        const Run& run = g.row_runs_[ri];
        for (std::size_t j = 0; j < run.iv.size(); ++j)
            if (run.iv[j]) {
                cands.push_back({run.bx[j], run.iv[j]->lo, true, static_cast<int>(ri), static_cast<int>(j)});
                cands.push_back({run.bx[j], run.iv[j]->hi, true, static_cast<int>(ri), static_cast<int>(j)});
            }
    }
    for (std::size_t ci = 0; ci < g.col_runs_.size(); ++ci) {
        const Run& run = g.col_runs_[ci];
        for (std::size_t j = 0; j < run.iv.size(); ++j)
            if (run.iv[j]) {
                cands.push_back({run.iv[j]->lo, run.bx[j], false, static_cast<int>(ci), static_cast<int>(j)});
                cands.push_back({run.iv[j]->hi, run.bx[j], false, static_cast<int>(ci), static_cast<int>(j)});
            }
    }
    const double tol = merge_tol(fsd);
    std::vector<std::size_t> order(cands.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return cands[a].x != cands[b].x ? cands[a].x < cands[b].x : cands[a].y < cands[b].y;
    });

    for (Run& run : g.row_runs_) {
        run.node_lo.assign(run.iv.size(), -1);
        run.node_hi.assign(run.iv.size(), -1);
        run.q_lo.assign(run.iv.size(), -1);
        run.q_hi.assign(run.iv.size(), -1);
    }
    for (Run& run : g.col_runs_) {
        run.node_lo.assign(run.iv.size(), -1);
        run.node_hi.assign(run.iv.size(), -1);
        run.q_lo.assign(run.iv.size(), -1);
        run.q_hi.assign(run.iv.size(), -1);
    }

    for (std::size_t oi = 0; oi < order.size();) {
        const Cand& first = cands[order[oi]];
        int id = static_cast<int>(g.nodes_.size());
        Node nd;
        nd.x = first.x;
        nd.y = first.y;
        std::size_t oj = oi;
        while (oj < order.size() && std::abs(cands[order[oj]].x - first.x) <= tol &&
               std::abs(cands[order[oj]].y - first.y) <= tol) {
            const Cand& c = cands[order[oj]];
            if (c.is_v) {
                Run& run = g.row_runs_[c.run];
                bool is_lo = std::abs(run.iv[c.boundary]->lo - c.y) <=
                             std::abs(run.iv[c.boundary]->hi - c.y);
                (is_lo ? run.node_lo : run.node_hi)[c.boundary] = id;
                bool have = false;
                for (const VRole& vr : nd.vroles)
                    if (vr.run == c.run && vr.boundary == c.boundary) have = true;
                if (!have) nd.vroles.push_back({c.run, c.boundary, -1});
            } else {
                Run& run = g.col_runs_[c.run];
                bool is_lo = std::abs(run.iv[c.boundary]->lo - c.x) <=
                             std::abs(run.iv[c.boundary]->hi - c.x);
                (is_lo ? run.node_lo : run.node_hi)[c.boundary] = id;
                bool have = false;
                for (const HRole& hr : nd.hroles)
                    if (hr.run == c.run && hr.boundary == c.boundary) have = true;
                if (!have) nd.hroles.push_back({c.run, c.boundary, -1});
            }
            ++oj;
        }
        g.nodes_.push_back(std::move(nd));
        oi = oj;
    }
    g.static_nodes_ = g.nodes_.size();

    // line trees: per row over the crits of its top line, per column over the
    // crits of its right line
    g.row_trees_.resize(fsd.row_count());
    g.col_trees_.resize(fsd.column_count());
    {
        // a node sits on row r's top line iff it has an h-role whose boundary
        // line equals that row's upper arc; equivalently row_of(line) - 1
        std::vector<std::vector<int>> row_members(fsd.row_count());
        std::vector<std::vector<int>> col_members(fsd.column_count());
        for (std::size_t id = 0; id < g.nodes_.size(); ++id) {
            const Node& nd = g.nodes_[id];
            for (const HRole& hr : nd.hroles) {
                const Run& run = g.col_runs_[hr.run];
                int row_below = fsd.cells()[run.cells[0]].row + hr.boundary - 1;
                if (row_below >= 0) row_members[row_below].push_back(static_cast<int>(id));
            }
            for (const VRole& vr : nd.vroles) {
                const Run& run = g.row_runs_[vr.run];
                int col_left = fsd.cells()[run.cells[0]].col + vr.boundary - 1;
                if (col_left >= 0) col_members[col_left].push_back(static_cast<int>(id));
            }
        }
        for (std::size_t r = 0; r < fsd.row_count(); ++r) {
            auto& mem = row_members[r];
            std::sort(mem.begin(), mem.end(), [&](int a, int b) {
                return g.nodes_[a].x < g.nodes_[b].x;
            });
            mem.erase(std::unique(mem.begin(), mem.end()), mem.end());
            LineTree& lt = g.row_trees_[r];
            lt.leaves = mem;
            lt.keys.reserve(mem.size());
            for (int id : mem) lt.keys.push_back(g.nodes_[id].x);
            lt.tree = RangeTree(lt.keys);
        }
        for (std::size_t c = 0; c < fsd.column_count(); ++c) {
            auto& mem = col_members[c];
            std::sort(mem.begin(), mem.end(), [&](int a, int b) {
                return g.nodes_[a].y < g.nodes_[b].y;
            });
            mem.erase(std::unique(mem.begin(), mem.end()), mem.end());
            LineTree& lt = g.col_trees_[c];
            lt.leaves = mem;
            lt.keys.reserve(mem.size());
            for (int id : mem) lt.keys.push_back(g.nodes_[id].y);
            lt.tree = RangeTree(lt.keys);
        }
    }

    // block trees, then the right-to-left / top-to-bottom reach dynamic
    // program for every boundary critical point
    auto build_blockers = [](Run& run) {
        std::size_t k = run.cells.size();
        std::vector<double> bt, tp;  // interior boundaries 1..k-1 at leaves 0..k-2
        for (std::size_t j = 1; j < k; ++j) {
            bt.push_back(run.iv[j]->lo);
            tp.push_back(run.iv[j]->hi);
        }
        run.blockers = BlockTree(std::move(bt), std::move(tp));
    };
    for (Run& run : g.row_runs_) build_blockers(run);
    for (Run& run : g.col_runs_) build_blockers(run);

    for (std::size_t ri = 0; ri < g.row_runs_.size(); ++ri) {
        Run& run = g.row_runs_[ri];
        int k = static_cast<int>(run.cells.size());
        for (int j = k; j >= 0; --j) {
            if (!run.iv[j]) continue;
            RunPos pos{static_cast<int>(ri), j};
            auto qlo = g.rightmost_from(run, pos, run.bx[j], run.iv[j]->lo);
            auto qhi = g.rightmost_from(run, pos, run.bx[j], run.iv[j]->hi);
            run.q_lo[j] = qlo ? *qlo : -1;
            run.q_hi[j] = qhi ? *qhi : -1;
        }
    }
    for (std::size_t ci = 0; ci < g.col_runs_.size(); ++ci) {
        Run& run = g.col_runs_[ci];
        int k = static_cast<int>(run.cells.size());
        for (int j = k; j >= 0; --j) {
            if (!run.iv[j]) continue;
            RunPos pos{static_cast<int>(ci), j};
            auto qlo = g.topmost_from(run, pos, run.bx[j], run.iv[j]->lo);
            auto qhi = g.topmost_from(run, pos, run.bx[j], run.iv[j]->hi);
            run.q_lo[j] = qlo ? *qlo : -1;
            run.q_hi[j] = qhi ? *qhi : -1;
        }
    }

    // copy reach targets onto the node roles and count canonical edges
    for (std::size_t ri = 0; ri < g.row_runs_.size(); ++ri) {
        Run& run = g.row_runs_[ri];
        for (std::size_t j = 0; j < run.iv.size(); ++j) {
            for (int id : {run.node_lo[j], run.node_hi[j]}) {
                if (id < 0) continue;
                int q = (id == run.node_lo[j]) ? run.q_lo[j] : run.q_hi[j];
                for (VRole& vr : g.nodes_[id].vroles)
                    if (vr.run == static_cast<int>(ri) && vr.boundary == static_cast<int>(j)) vr.q = q;
            }
        }
    }
    for (std::size_t ci = 0; ci < g.col_runs_.size(); ++ci) {
        Run& run = g.col_runs_[ci];
        for (std::size_t j = 0; j < run.iv.size(); ++j) {
            for (int id : {run.node_lo[j], run.node_hi[j]}) {
                if (id < 0) continue;
                int q = (id == run.node_lo[j]) ? run.q_lo[j] : run.q_hi[j];
                for (HRole& hr : g.nodes_[id].hroles)
                    if (hr.run == static_cast<int>(ci) && hr.boundary == static_cast<int>(j)) hr.q = q;
            }
        }
    }
    for (const Node& nd : g.nodes_) {
        for (const VRole& vr : nd.vroles) {
            if (vr.q < 0) continue;
            const Run& run = g.row_runs_[vr.run];
            g.edge_count_ += g.row_trees_[run.line].tree.cover(nd.x, g.nodes_[vr.q].x).size();
        }
        for (const HRole& hr : nd.hroles) {
            if (hr.q < 0) continue;
            const Run& run = g.col_runs_[hr.run];
            g.edge_count_ += g.col_trees_[run.line].tree.cover(nd.y, g.nodes_[hr.q].y).size();
        }
    }
    return g;
}

ReachabilityGraph build_graph(const FreeSpaceDiagram& fsd) { return ReachabilityGraph::build(fsd); }

// ------------------------------------------------------------- positioning

std::optional<ReachabilityGraph::RunPos> ReachabilityGraph::locate_in_row(int row, Point p) const {
    const double tol = merge_tol(*fsd_);
    int col = fsd_->column_of(p.x);
    int cell = fsd_->cell_at(row, col);
    if (cell < 0 && col > 0 && p.x <= fsd_->p_map().segment_source_lo(col) + tol)
        cell = fsd_->cell_at(row, col - 1);
    if (cell < 0) return std::nullopt;
    int run_id = cell_row_run_[cell];
    const Run& run = row_runs_[run_id];
    auto it = std::lower_bound(run.cells.begin(), run.cells.end(), cell);
    int idx = static_cast<int>(it - run.cells.begin());
    int k = static_cast<int>(run.cells.size());
    while (idx < k && p.x >= run.bx[idx + 1]) ++idx;
    return RunPos{run_id, idx};
}

std::optional<ReachabilityGraph::RunPos> ReachabilityGraph::locate_in_col(int col, Point p) const {
    const double tol = merge_tol(*fsd_);
    int row = fsd_->row_of(p.y);
    int cell = fsd_->cell_at(row, col);
    if (cell < 0 && row > 0 && p.y <= fsd_->q_map().segment_source_lo(row) + tol)
        cell = fsd_->cell_at(row - 1, col);
    if (cell < 0) return std::nullopt;
    int run_id = cell_col_run_[cell];
    const Run& run = col_runs_[run_id];
    auto it = std::lower_bound(run.cells.begin(), run.cells.end(), cell, [&](int a, int b) {
        return fsd_->cells()[a].row < fsd_->cells()[b].row;
    });
    int idx = static_cast<int>(it - run.cells.begin());
    int k = static_cast<int>(run.cells.size());
    while (idx < k && p.y >= run.bx[idx + 1]) ++idx;
    return RunPos{run_id, idx};
}

namespace {

// rightmost tree leaf with key in [lo, hi]
std::optional<int> rightmost_leaf(const ReachabilityGraph::LineTree& lt, double lo, double hi) {
    auto it = std::upper_bound(lt.keys.begin(), lt.keys.end(), hi);
    if (it == lt.keys.begin()) return std::nullopt;
    std::size_t idx = static_cast<std::size_t>(it - lt.keys.begin()) - 1;
    if (lt.keys[idx] < lo) return std::nullopt;
    return lt.leaves[idx];
}

}  // namespace

namespace {

// Blocking is evaluated with non-strict comparisons, so a ray at exactly the
// top of a boundary interval reports a block even though the white set is
// closed and the path can squeeze through that single point. Walk past such
// equality-grade hits; a genuine block has the ray strictly above the
// interval.
template <typename Fallback>
std::optional<int> reach_walk(const ReachabilityGraph::Run& run, std::ptrdiff_t from, double ray,
                              double tol, Fallback&& fallback) {
    int k = static_cast<int>(run.cells.size());
    while (true) {
        auto hit = run.blockers.first_blocker(from, ray);
        if (!hit) return fallback(run.bx[k]);
        std::size_t jb = hit->index + 1;
        if (hit->kind == BlockTree::Kind::top && ray <= run.iv[jb]->hi + tol) {
            from = static_cast<std::ptrdiff_t>(hit->index);
            continue;
        }
        if (hit->kind == BlockTree::Kind::bottom && run.q_lo[jb] >= 0) return run.q_lo[jb];
        return fallback(run.bx[jb]);
    }
}

}  // namespace

std::optional<int> ReachabilityGraph::rightmost_from(const Run& run, const RunPos& pos,
                                                     double x, double y) const {
    const double tol = merge_tol(*fsd_);
    return reach_walk(run, pos.cell_index - 1, y, tol, [&](double hi_x) {
        return rightmost_leaf(row_trees_[run.line], x, hi_x);
    });
}

std::optional<int> ReachabilityGraph::topmost_from(const Run& run, const RunPos& pos,
                                                   double y, double x) const {
    const double tol = merge_tol(*fsd_);
    return reach_walk(run, pos.cell_index - 1, x, tol, [&](double hi_y) {
        return rightmost_leaf(col_trees_[run.line], y, hi_y);
    });
}

std::optional<int> ReachabilityGraph::rightmost_reachable(int row, Point p) const {
    if (!fsd_->is_white_tol(p.x, p.y))
        throw std::invalid_argument("rightmost_reachable: point is not white");
    auto pos = locate_in_row(row, p);
    if (!pos) return std::nullopt;
    return rightmost_from(row_runs_[pos->run], *pos, p.x, p.y);
}

std::optional<int> ReachabilityGraph::topmost_reachable(int col, Point p) const {
    if (!fsd_->is_white_tol(p.x, p.y))
        throw std::invalid_argument("topmost_reachable: point is not white");
    auto pos = locate_in_col(col, p);
    if (!pos) return std::nullopt;
    return topmost_from(col_runs_[pos->run], *pos, p.y, p.x);
}

int ReachabilityGraph::insert_greedy_point(Point p) {
    if (!fsd_->is_white_tol(p.x, p.y))
        throw std::invalid_argument("insert_greedy_point: point is not white");
    Node nd;
    nd.x = p.x;
    nd.y = p.y;
    nd.greedy = true;
    int row = fsd_->row_of(p.y);
    if (auto rp = locate_in_row(row, p)) {
        nd.g_row_run = rp->run;
        nd.g_row_cell = rp->cell_index;
        if (auto q = rightmost_from(row_runs_[rp->run], *rp, p.x, p.y)) nd.g_q_row = *q;
    }
    int col = fsd_->column_of(p.x);
    if (auto cp = locate_in_col(col, p)) {
        nd.g_col_run = cp->run;
        nd.g_col_cell = cp->cell_index;
        if (auto q = topmost_from(col_runs_[cp->run], *cp, p.y, p.x)) nd.g_q_col = *q;
    }
    nodes_.push_back(std::move(nd));
    return static_cast<int>(nodes_.size()) - 1;
}

void ReachabilityGraph::remove_greedy_point(int id) {
    if (id != static_cast<int>(nodes_.size()) - 1 || !nodes_[id].greedy)
        throw std::invalid_argument("remove_greedy_point: removal is LIFO over greedy nodes");
    nodes_.pop_back();
}

// ------------------------------------------------------------ reachability

bool ReachabilityGraph::row_profile_reach(Point from, Point to) const {
    const double tol = merge_tol(*fsd_);
    if (to.x < from.x - tol || to.y < from.y - tol) return false;
    // rows containing both heights
    int r0 = fsd_->row_of(from.y);
    for (int r : {r0, r0 - 1}) {
        if (r < 0) continue;
        double lo = fsd_->q_map().segment_source_lo(r);
        double hi = fsd_->q_map().segment_source_hi(r);
        if (from.y < lo - tol || from.y > hi + tol) continue;
        if (to.y < lo - tol || to.y > hi + tol) continue;
        auto pa = locate_in_row(r, from);
        auto pb = locate_in_row(r, to);
        if (!pa || !pb || pa->run != pb->run) continue;
        const Run& run = row_runs_[pa->run];
        double h = from.y;
        bool ok = true;
        for (int j = pa->cell_index + 1; j <= pb->cell_index && j < static_cast<int>(run.bx.size()); ++j) {
            if (static_cast<std::size_t>(j) >= run.iv.size() || !run.iv[j]) { ok = false; break; }
            if (h > run.iv[j]->hi + tol) { ok = false; break; }
            h = std::max(h, run.iv[j]->lo);
        }
        if (ok && h <= to.y + tol) return true;
    }
    return false;
}

bool ReachabilityGraph::col_profile_reach(Point from, Point to) const {
    const double tol = merge_tol(*fsd_);
    if (to.x < from.x - tol || to.y < from.y - tol) return false;
    int c0 = fsd_->column_of(from.x);
    for (int c : {c0, c0 - 1}) {
        if (c < 0) continue;
        double lo = fsd_->p_map().segment_source_lo(c);
        double hi = fsd_->p_map().segment_source_hi(c);
        if (from.x < lo - tol || from.x > hi + tol) continue;
        if (to.x < lo - tol || to.x > hi + tol) continue;
        auto pa = locate_in_col(c, from);
        auto pb = locate_in_col(c, to);
        if (!pa || !pb || pa->run != pb->run) continue;
        const Run& run = col_runs_[pa->run];
        double h = from.x;
        bool ok = true;
        for (int j = pa->cell_index + 1; j <= pb->cell_index && j < static_cast<int>(run.bx.size()); ++j) {
            if (static_cast<std::size_t>(j) >= run.iv.size() || !run.iv[j]) { ok = false; break; }
            if (h > run.iv[j]->hi + tol) { ok = false; break; }
            h = std::max(h, run.iv[j]->lo);
        }
        if (ok && h <= to.x + tol) return true;
    }
    return false;
}

bool ReachabilityGraph::reachable(int a, int b) const {
    if (a == b) return true;
    std::vector<char> seen(nodes_.size(), 0);
    std::deque<int> queue;
    queue.push_back(a);
    seen[a] = 1;
    Point target{nodes_[b].x, nodes_[b].y};
    while (!queue.empty()) {
        int n = queue.front();
        queue.pop_front();
        if (n == b) return true;
        Point pn{nodes_[n].x, nodes_[n].y};
        if (row_profile_reach(pn, target) || col_profile_reach(pn, target)) return true;
        for (const VRole& vr : nodes_[n].vroles) {
            if (vr.q < 0) continue;
            const LineTree& lt = row_trees_[row_runs_[vr.run].line];
            auto lo = std::lower_bound(lt.keys.begin(), lt.keys.end(), pn.x) - lt.keys.begin();
            auto hi = std::upper_bound(lt.keys.begin(), lt.keys.end(), nodes_[vr.q].x) - lt.keys.begin();
            for (auto i = lo; i < hi; ++i) {
                int m = lt.leaves[i];
                if (!seen[m]) { seen[m] = 1; queue.push_back(m); }
            }
        }
        for (const HRole& hr : nodes_[n].hroles) {
            if (hr.q < 0) continue;
            const LineTree& lt = col_trees_[col_runs_[hr.run].line];
            auto lo = std::lower_bound(lt.keys.begin(), lt.keys.end(), pn.y) - lt.keys.begin();
            auto hi = std::upper_bound(lt.keys.begin(), lt.keys.end(), nodes_[hr.q].y) - lt.keys.begin();
            for (auto i = lo; i < hi; ++i) {
                int m = lt.leaves[i];
                if (!seen[m]) { seen[m] = 1; queue.push_back(m); }
            }
        }
        if (nodes_[n].greedy) {
            if (nodes_[n].g_q_row >= 0) {
                const LineTree& lt = row_trees_[row_runs_[nodes_[n].g_row_run].line];
                auto lo = std::lower_bound(lt.keys.begin(), lt.keys.end(), pn.x) - lt.keys.begin();
                auto hi = std::upper_bound(lt.keys.begin(), lt.keys.end(), nodes_[nodes_[n].g_q_row].x) -
                          lt.keys.begin();
                for (auto i = lo; i < hi; ++i)
                    if (!seen[lt.leaves[i]]) { seen[lt.leaves[i]] = 1; queue.push_back(lt.leaves[i]); }
            }
            if (nodes_[n].g_q_col >= 0) {
                const LineTree& lt = col_trees_[col_runs_[nodes_[n].g_col_run].line];
                auto lo = std::lower_bound(lt.keys.begin(), lt.keys.end(), pn.y) - lt.keys.begin();
                auto hi = std::upper_bound(lt.keys.begin(), lt.keys.end(), nodes_[nodes_[n].g_q_col].y) -
                          lt.keys.begin();
                for (auto i = lo; i < hi; ++i)
                    if (!seen[lt.leaves[i]]) { seen[lt.leaves[i]] = 1; queue.push_back(lt.leaves[i]); }
            }
        }
    }
    return false;
}

}  // namespace subtraj
