#include "subtraj/simplify.hpp"

#include <algorithm>

namespace subtraj {

namespace {

Trajectory pick(const Trajectory& src, const std::vector<std::size_t>& idx) {
    std::vector<Point> pts;
    pts.reserve(idx.size());
    for (std::size_t i : idx) pts.push_back(src.vertex(i));
    return Trajectory(std::move(pts));
}

}  // namespace

SimplifiedCurve::SimplifiedCurve(Trajectory src, double mu, std::vector<std::size_t> idx)
    : source_(std::move(src)), mu_(mu), indices_(std::move(idx)), simplified_(pick(source_, indices_)) {
    std::size_t last = indices_.size() - 1;
    double final_len = dist(source_.vertex(indices_[last - 1]), source_.vertex(indices_[last]));
    short_final_ = final_len < mu_ * (1.0 - kRelTol);
}

SimplifiedCurve SimplifiedCurve::greedy(const Trajectory& source, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("simplify: mu must be positive");
    const std::size_t n = source.size();
    std::vector<std::size_t> idx;
    idx.push_back(0);
    std::size_t cur = 0;
    while (cur + 1 < n) {
        std::size_t next = n - 1;
        for (std::size_t j = cur + 1; j < n; ++j) {
            // a vertex exactly on the ball boundary counts as outside
            if (dist(source.vertex(j), source.vertex(cur)) >= mu * (1.0 - kRelTol)) {
                next = j;
                break;
            }
        }
        if (next == n - 1 && dist(source.vertex(next), source.vertex(cur)) == 0.0) {
            // closed curve whose tail returns exactly to the current vertex:
            // keep the farthest intermediate vertex so both final segments
            // are non-degenerate
            std::size_t far = cur + 1;
            double far_d = 0.0;
            for (std::size_t j = cur + 1; j < n - 1; ++j) {
                double d = dist(source.vertex(j), source.vertex(cur));
                if (d > far_d) { far_d = d; far = j; }
            }
            idx.push_back(far);
            idx.push_back(n - 1);
            break;
        }
        idx.push_back(next);
        cur = next;
    }
    return SimplifiedCurve(source, mu, std::move(idx));
}

SimplifiedCurve SimplifiedCurve::from_indices(const Trajectory& source, double mu,
                                              std::vector<std::size_t> indices) {
    if (!(mu > 0.0)) throw std::invalid_argument("simplify: mu must be positive");
    if (indices.size() < 2 || indices.front() != 0 || indices.back() != source.size() - 1)
        throw std::invalid_argument("simplify: indices must start at 0 and end at the last vertex");
    if (!std::is_sorted(indices.begin(), indices.end()) ||
        std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw std::invalid_argument("simplify: indices must be strictly increasing");
    return SimplifiedCurve(source, mu, std::move(indices));
}

SimplifiedCurve simplify_curve(const Trajectory& t, double mu) {
    return SimplifiedCurve::greedy(t, mu);
}

SimplificationMap::SimplificationMap(SimplifiedCurve curve) : curve_(std::move(curve)) {
    const Trajectory& src = curve_.source();
    const Trajectory& simp = curve_.simplified();
    const auto& idx = curve_.vertex_indices();
    const std::size_t k = curve_.segment_count();

    src_vertex_arc_.resize(k + 1);
    simp_vertex_arc_.resize(k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
        src_vertex_arc_[i] = src.prefix_lengths()[idx[i]];
        simp_vertex_arc_[i] = simp.prefix_lengths()[i];
    }

    pieces_.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        double sub_len = src_vertex_arc_[i + 1] - src_vertex_arc_[i];
        double seg_len = simp_vertex_arc_[i + 1] - simp_vertex_arc_[i];
        bool is_final = (i + 1 == k);
        if (is_final && curve_.short_final()) {
            pieces_[i] = {sub_len * 0.5, seg_len * 0.5, sub_len, seg_len};
            continue;
        }
        Point u = src.vertex(idx[i]);
        auto exit = ball_exit_point(src, src_vertex_arc_[i], Ball(u, curve_.mu()));
        double w_arc;
        if (exit && *exit <= src_vertex_arc_[i + 1] + kRelTol * src.length()) {
            w_arc = std::min(*exit, src_vertex_arc_[i + 1]) - src_vertex_arc_[i];
        } else {
            // no crossing inside the subcurve (non-greedy input); fall back to
            // the midpoint split
            pieces_[i] = {sub_len * 0.5, seg_len * 0.5, sub_len, seg_len};
            continue;
        }
        double uprime = std::min(curve_.mu(), seg_len);
        pieces_[i] = {w_arc, uprime, sub_len, seg_len};
    }

    breaks_.reserve(2 * k + 1);
    for (std::size_t i = 0; i < k; ++i) {
        breaks_.push_back(src_vertex_arc_[i]);
        if (pieces_[i].w_arc > 0.0 && pieces_[i].w_arc < pieces_[i].sub_len)
            breaks_.push_back(src_vertex_arc_[i] + pieces_[i].w_arc);
    }
    breaks_.push_back(src_vertex_arc_[k]);
}

double SimplificationMap::map_param(double x) const {
    const double len = curve_.source().length();
    if (x < -kRelTol * len || x > len * (1.0 + kRelTol))
        throw std::domain_error("map_param: arc length out of range");
    x = std::clamp(x, 0.0, len);
    auto it = std::upper_bound(src_vertex_arc_.begin(), src_vertex_arc_.end(), x);
    std::size_t i = it == src_vertex_arc_.begin() ? 0 : static_cast<std::size_t>(it - src_vertex_arc_.begin()) - 1;
    if (i >= pieces_.size()) i = pieces_.size() - 1;
    const PieceMap& pm = pieces_[i];
    double xl = x - src_vertex_arc_[i];
    double yl;
    if (xl <= pm.w_arc) {
        yl = pm.w_arc > 0.0 ? xl * (pm.uprime_arc / pm.w_arc) : 0.0;
    } else {
        double rest = pm.sub_len - pm.w_arc;
        yl = pm.uprime_arc + (rest > 0.0 ? (xl - pm.w_arc) * ((pm.seg_len - pm.uprime_arc) / rest) : 0.0);
    }
    return simp_vertex_arc_[i] + std::min(yl, pm.seg_len);
}

Point SimplificationMap::map_point(double x) const {
    return curve_.simplified().point_at(map_param(x));
}

std::size_t SimplificationMap::segment_of(double x) const {
    x = std::clamp(x, 0.0, curve_.source().length());
    auto it = std::upper_bound(src_vertex_arc_.begin(), src_vertex_arc_.end(), x);
    std::size_t i = it == src_vertex_arc_.begin() ? 0 : static_cast<std::size_t>(it - src_vertex_arc_.begin()) - 1;
    return std::min(i, pieces_.size() - 1);
}

SimplificationMap build_map(SimplifiedCurve curve) { return SimplificationMap(std::move(curve)); }

}  // namespace subtraj
