#include "subtraj/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace subtraj {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::optional<FreeInterval> circle_segment_interval(Point center, double d, const Segment& s) {
    Point dir = s.b - s.a;
    Point f = s.a - center;
    double qa = norm2(dir);
    double qb = dot(f, dir);
    double qc = norm2(f) - d * d;
    double disc = qb * qb - qa * qc;
    if (disc < 0.0) return std::nullopt;
    double sq = std::sqrt(disc);
    double t1 = (-qb - sq) / qa;
    double t2 = (-qb + sq) / qa;
    double lo = std::max(t1, 0.0);
    double hi = std::min(t2, 1.0);
    if (lo > hi) return std::nullopt;
    return FreeInterval{lo, hi};
}

ExactFreeSpace::ExactFreeSpace(Trajectory p, Trajectory q, double d)
    : p_(std::move(p)), q_(std::move(q)), d_(d) {
    if (!(d >= 0.0)) throw std::invalid_argument("exact free space: d must be non-negative");
}

bool ExactFreeSpace::white(double x, double y) const {
    return dist(p_.point_at(x), q_.point_at(y)) <= d_;
}

std::optional<FreeInterval> ExactFreeSpace::vertical(double x, std::size_t j) const {
    auto iv = circle_segment_interval(p_.point_at(x), d_, q_.edge(j));
    if (!iv) return std::nullopt;
    double lo = q_.prefix_lengths()[j];
    double len = q_.prefix_lengths()[j + 1] - lo;
    return FreeInterval{lo + iv->lo * len, lo + iv->hi * len};
}

std::optional<FreeInterval> ExactFreeSpace::horizontal(std::size_t i, double y) const {
    auto iv = circle_segment_interval(q_.point_at(y), d_, p_.edge(i));
    if (!iv) return std::nullopt;
    double lo = p_.prefix_lengths()[i];
    double len = p_.prefix_lengths()[i + 1] - lo;
    return FreeInterval{lo + iv->lo * len, lo + iv->hi * len};
}

// --------------------------------------------------------- frechet decision

namespace {

struct MaybeIv {
    bool ok = false;
    double lo = 0.0, hi = 0.0;
};

MaybeIv to_maybe(const std::optional<FreeInterval>& iv) {
    if (!iv) return {};
    return {true, iv->lo, iv->hi};
}

}  // namespace

bool frechet_decide(const Trajectory& p, const Trajectory& q, double d) {
    if (!(d >= 0.0)) throw std::invalid_argument("frechet_decide: d must be non-negative");
    if (dist(p.vertices().front(), q.vertices().front()) > d) return false;
    if (dist(p.vertices().back(), q.vertices().back()) > d) return false;

    const std::size_t n = p.edge_count();
    const std::size_t m = q.edge_count();
    ExactFreeSpace fs(p, q, d);

    // reachable parts of vertical boundaries (i in 0..n) and horizontal
    // boundaries (j in 0..m)
    std::vector<std::vector<MaybeIv>> L(n + 1, std::vector<MaybeIv>(m));
    std::vector<std::vector<MaybeIv>> B(n, std::vector<MaybeIv>(m + 1));

    // left edge of the diagram: climb from the origin
    for (std::size_t j = 0; j < m; ++j) {
        auto free = to_maybe(fs.vertical(0.0, j));
        if (!free.ok) break;
        double enter = q.prefix_lengths()[j];
        if (j == 0) {
            if (free.lo > 0.0) break;
            L[0][0] = {true, 0.0, free.hi};
        } else {
            if (!L[0][j - 1].ok || L[0][j - 1].hi < enter - kRelTol * q.length()) break;
            if (free.lo > enter) break;
            L[0][j] = {true, enter, free.hi};
        }
        if (L[0][j].hi < q.prefix_lengths()[j + 1]) break;
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto free = to_maybe(fs.horizontal(i, 0.0));
        if (!free.ok) break;
        double enter = p.prefix_lengths()[i];
        if (i == 0) {
            if (free.lo > 0.0) break;
            B[0][0] = {true, 0.0, free.hi};
        } else {
            if (!B[i - 1][0].ok || B[i - 1][0].hi < enter - kRelTol * p.length()) break;
            if (free.lo > enter) break;
            B[i][0] = {true, enter, free.hi};
        }
        if (B[i][0].hi < p.prefix_lengths()[i + 1]) break;
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const MaybeIv& left = L[i][j];
            const MaybeIv& bottom = B[i][j];
            if (!left.ok && !bottom.ok) continue;
            // right boundary
            auto rf = to_maybe(fs.vertical(p.prefix_lengths()[i + 1], j));
            if (rf.ok) {
                double lo = kInf;
                if (bottom.ok) lo = rf.lo;
                else if (left.ok) lo = std::max(rf.lo, left.lo);
                if (lo <= rf.hi) {
                    MaybeIv& dst = L[i + 1][j];
                    if (!dst.ok || lo < dst.lo) dst = {true, lo, rf.hi};
                }
            }
            // top boundary
            auto tf = to_maybe(fs.horizontal(i, q.prefix_lengths()[j + 1]));
            if (tf.ok) {
                double lo = kInf;
                if (left.ok) lo = tf.lo;
                else if (bottom.ok) lo = std::max(tf.lo, bottom.lo);
                if (lo <= tf.hi) {
                    MaybeIv& dst = B[i][j + 1];
                    if (!dst.ok || lo < dst.lo) dst = {true, lo, tf.hi};
                }
            }
        }
    }
    const double qlen = q.length();
    const MaybeIv& lastL = L[n][m - 1];
    if (lastL.ok && lastL.hi >= qlen * (1.0 - kRelTol) - kRelTol) return true;
    const double plen = p.length();
    const MaybeIv& lastB = B[n - 1][m];
    return lastB.ok && lastB.hi >= plen * (1.0 - kRelTol) - kRelTol;
}

// ------------------------------------------------------- lowest end, exact

double exact_lowest_end(const Trajectory& tr, double d, double s, double a, double t) {
    const auto& pre = tr.prefix_lengths();
    const std::size_t m = tr.edge_count();
    if (dist(tr.point_at(s), tr.point_at(a)) > d) return kInf;

    // x slice boundaries: s, interior vertices strictly between, t
    std::vector<double> xs;
    xs.push_back(s);
    for (double v : pre)
        if (v > s && v < t) xs.push_back(v);
    xs.push_back(t);
    const std::size_t K = xs.size() - 1;  // slice count

    // reachable part of each vertical slice boundary, per q edge
    std::vector<std::vector<MaybeIv>> L(xs.size(), std::vector<MaybeIv>(m));
    std::vector<std::vector<MaybeIv>> B(K, std::vector<MaybeIv>(m + 1));

    // boundary x = s: climb from (s, a)
    std::size_t j0 = tr.edge_index_at(a);
    {
        Point c = tr.point_at(s);
        for (std::size_t j = j0; j < m; ++j) {
            auto iv = circle_segment_interval(c, d, tr.edge(j));
            if (!iv) break;
            double lo = pre[j] + iv->lo * (pre[j + 1] - pre[j]);
            double hi = pre[j] + iv->hi * (pre[j + 1] - pre[j]);
            double enter = j == j0 ? a : pre[j];
            if (j > j0 && (!L[0][j - 1].ok || L[0][j - 1].hi < pre[j] * (1.0 - 1e-15) - 1e-12))
                break;
            if (lo > enter + 1e-12) break;
            L[0][j] = {true, enter, hi};
            if (hi < pre[j + 1] - 1e-12) break;
        }
        if (!L[0][j0].ok) return kInf;
    }

    for (std::size_t k = 0; k < K; ++k) {
        double x0 = xs[k], x1 = xs[k + 1];
        std::size_t pe = tr.edge_index_at((x0 + x1) / 2.0);  // containing p edge
        Point e0 = tr.point_at(x0);
        Point e1 = tr.point_at(x1);
        (void)pe;
        std::optional<Segment> slice_seg;
        if (dist(e0, e1) > 0.0) slice_seg = Segment(e0, e1);
        Point right_center = e1;
        for (std::size_t j = 0; j < m; ++j) {
            const MaybeIv& left = L[k][j];
            const MaybeIv& bottom = B[k][j];
            if (!left.ok && !bottom.ok) continue;
            auto rf = circle_segment_interval(right_center, d, tr.edge(j));
            if (rf) {
                double lo_y = pre[j] + rf->lo * (pre[j + 1] - pre[j]);
                double hi_y = pre[j] + rf->hi * (pre[j + 1] - pre[j]);
                double lo = kInf;
                if (bottom.ok) lo = lo_y;
                else if (left.ok) lo = std::max(lo_y, left.lo);
                if (lo <= hi_y) {
                    MaybeIv& dst = L[k + 1][j];
                    if (!dst.ok || lo < dst.lo) dst = {true, lo, hi_y};
                }
            }
            if (slice_seg) {
                auto tf = circle_segment_interval(tr.point_at(pre[j + 1]), d, *slice_seg);
                if (tf) {
                    double lo_x = x0 + tf->lo * (x1 - x0);
                    double hi_x = x0 + tf->hi * (x1 - x0);
                    double lo = kInf;
                    if (left.ok) lo = lo_x;
                    else if (bottom.ok) lo = std::max(lo_x, bottom.lo);
                    if (lo <= hi_x) {
                        MaybeIv& dst = B[k][j + 1];
                        if (!dst.ok || lo < dst.lo) dst = {true, lo, hi_x};
                    }
                }
            }
        }
    }

    double best = kInf;
    for (std::size_t j = 0; j < m; ++j)
        if (L[K][j].ok) best = std::min(best, L[K][j].lo);
    return best;
}

// --------------------------------------------------------------- SC oracle

int exact_count_paths(const Trajectory& tr, double d, double s, double t, int cap) {
    if (cap <= 0) return 0;
    const auto& pre = tr.prefix_lengths();
    const std::size_t m = tr.edge_count();
    Point c = tr.point_at(s);
    std::vector<FreeInterval> intervals;
    for (std::size_t j = 0; j < m; ++j) {
        auto iv = circle_segment_interval(c, d, tr.edge(j));
        if (!iv) continue;
        double lo = pre[j] + iv->lo * (pre[j + 1] - pre[j]);
        double hi = pre[j] + iv->hi * (pre[j + 1] - pre[j]);
        if (!intervals.empty() && lo <= intervals.back().hi + 1e-12)
            intervals.back().hi = std::max(intervals.back().hi, hi);
        else
            intervals.push_back({lo, hi});
    }
    int count = 0;
    double cursor = -kInf;
    for (const auto& iv : intervals) {
        if (count >= cap) break;
        double start = std::max(iv.lo, cursor);
        while (count < cap && start <= iv.hi && start <= s) {
            double e = exact_lowest_end(tr, d, s, start, t);
            if (e > s) break;
            ++count;
            cursor = e;
            start = std::max(start, e);
        }
    }
    cursor = t;
    for (const auto& iv : intervals) {
        if (count >= cap) break;
        if (iv.hi < cursor) continue;
        double start = std::max(iv.lo, cursor);
        while (count < cap && start <= iv.hi) {
            double e = exact_lowest_end(tr, d, s, start, t);
            if (e == kInf) break;
            ++count;
            cursor = std::max(e, start);
            start = cursor;
        }
    }
    return count;
}

bool sc_bruteforce(const Trajectory& tr, const ClusterQuery& q, int grid_steps) {
    if (tr.size() > 14) throw std::invalid_argument("sc_bruteforce: guarded to n <= 14");
    if (q.m < 1) throw std::invalid_argument("sc_bruteforce: m must be >= 1");
    const double len = tr.length();
    if (q.l > len * (1.0 + kRelTol)) return false;
    if (q.m == 1) return true;

    const auto& pre = tr.prefix_lengths();
    std::vector<Window> windows;
    if (q.mode == Mode::vertex) {
        for (std::size_t i = 0; i < pre.size(); ++i)
            for (std::size_t j = i + 1; j < pre.size(); ++j)
                if (pre[j] - pre[i] >= q.l * (1.0 - kRelTol)) windows.push_back({pre[i], pre[j]});
    } else {
        std::vector<double> anchors;
        for (int k = 0; k <= grid_steps; ++k)
            anchors.push_back(len * static_cast<double>(k) / grid_steps);
        for (double v : pre) anchors.push_back(v);
        // exact critical x's: endpoints of horizontal white intervals at
        // every vertex line, for every edge
        for (std::size_t vj = 0; vj < pre.size(); ++vj) {
            Point c = tr.vertex(vj);
            for (std::size_t i = 0; i < tr.edge_count(); ++i) {
                auto iv = circle_segment_interval(c, q.d, tr.edge(i));
                if (!iv) continue;
                anchors.push_back(pre[i] + iv->lo * (pre[i + 1] - pre[i]));
                anchors.push_back(pre[i] + iv->hi * (pre[i + 1] - pre[i]));
            }
        }
        std::sort(anchors.begin(), anchors.end());
        anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
        for (double s : anchors)
            if (s >= 0.0 && s + q.l <= len * (1.0 + kRelTol))
                windows.push_back({s, std::min(s + q.l, len)});
    }
    for (const Window& w : windows)
        if (exact_count_paths(tr, q.d, w.s, w.t, q.m - 1) >= q.m - 1) return true;
    return false;
}

}  // namespace subtraj
