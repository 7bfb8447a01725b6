#include "subtraj/search_structs.hpp"

#include <algorithm>
#include <cmath>

namespace subtraj {

// ---------------------------------------------------------------- RangeTree

RangeTree::RangeTree(std::vector<double> keys) : keys_(std::move(keys)) {
    if (!std::is_sorted(keys_.begin(), keys_.end()))
        throw std::invalid_argument("range tree: keys must be sorted");
    if (keys_.empty()) return;
    nodes_.reserve(2 * keys_.size());
    root_ = build(0, keys_.size(), 0);
}

int RangeTree::build(std::size_t lo, std::size_t hi, std::size_t depth) {
    height_ = std::max(height_, depth + 1);
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({lo, hi, -1, -1});
    if (hi - lo > 1) {
        std::size_t mid = lo + (hi - lo) / 2;
        int l = build(lo, mid, depth + 1);
        int r = build(mid, hi, depth + 1);
        nodes_[id].left = l;
        nodes_[id].right = r;
    }
    return id;
}

std::pair<std::size_t, std::size_t> RangeTree::leaf_range(double lo_key, double hi_key) const {
    auto lo = std::lower_bound(keys_.begin(), keys_.end(), lo_key) - keys_.begin();
    auto hi = std::upper_bound(keys_.begin(), keys_.end(), hi_key) - keys_.begin();
    return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

std::vector<int> RangeTree::cover(double lo_key, double hi_key) const {
    auto [lo, hi] = leaf_range(lo_key, hi_key);
    return cover_leaves(lo, hi);
}

std::vector<int> RangeTree::cover_leaves(std::size_t lo, std::size_t hi) const {
    std::vector<int> out;
    if (root_ >= 0 && lo < hi) cover_rec(root_, lo, hi, out);
    return out;
}

void RangeTree::cover_rec(int node, std::size_t lo, std::size_t hi, std::vector<int>& out) const {
    const Node& nd = nodes_[node];
    if (hi <= nd.lo || nd.hi <= lo) return;
    if (lo <= nd.lo && nd.hi <= hi) {
        out.push_back(node);
        return;
    }
    cover_rec(nd.left, lo, hi, out);
    cover_rec(nd.right, lo, hi, out);
}

// ---------------------------------------------------------------- BlockTree

BlockTree::BlockTree(std::vector<double> bottoms, std::vector<double> tops)
    : bottoms_(std::move(bottoms)), tops_(std::move(tops)) {
    if (bottoms_.size() != tops_.size())
        throw std::invalid_argument("block tree: size mismatch");
    std::size_t n = bottoms_.size();
    tree_size_ = 1;
    while (tree_size_ < std::max<std::size_t>(n, 1)) tree_size_ *= 2;
    agg_.assign(2 * tree_size_, Agg{});
    for (std::size_t i = 0; i < n; ++i)
        agg_[tree_size_ + i] = {bottoms_[i], tops_[i]};
    for (std::size_t i = tree_size_ - 1; i >= 1; --i) {
        agg_[i].max_bottom = std::max(agg_[2 * i].max_bottom, agg_[2 * i + 1].max_bottom);
        agg_[i].min_top = std::min(agg_[2 * i].min_top, agg_[2 * i + 1].min_top);
    }
}

std::optional<BlockTree::Hit> BlockTree::first_blocker(std::ptrdiff_t from, double y) const {
    std::size_t n = bottoms_.size();
    std::size_t start = from < 0 ? 0 : static_cast<std::size_t>(from) + 1;
    if (start >= n) return std::nullopt;
    // walk the segment tree for the first leaf >= start whose node blocks y
    std::size_t pos = tree_size_ + start;
    // climb while the current (right-going) sibling ranges do not contain a blocker
    auto blocks = [&](std::size_t node) {
        return y <= agg_[node].max_bottom || y >= agg_[node].min_top;
    };
    // first check the start leaf explicitly, then move right
    if (blocks(pos)) {
        std::size_t j = pos - tree_size_;
        return Hit{j, y <= bottoms_[j] ? Kind::bottom : Kind::top};
    }
    while (pos > 1) {
        if (pos % 2 == 0) {  // left child: sibling to the right
            if (blocks(pos + 1)) {
                pos = pos + 1;
                // descend to the leftmost blocking leaf
                while (pos < tree_size_) pos = blocks(2 * pos) ? 2 * pos : 2 * pos + 1;
                std::size_t j = pos - tree_size_;
                if (j >= n) return std::nullopt;
                return Hit{j, y <= bottoms_[j] ? Kind::bottom : Kind::top};
            }
        }
        pos /= 2;
    }
    return std::nullopt;
}

// -------------------------------------------------------------- IntervalTree

IntervalTree::IntervalTree(std::vector<std::pair<double, double>> intervals)
    : iv_(std::move(intervals)), n_(iv_.size()) {
    for (auto& [lo, hi] : iv_)
        if (hi < lo) throw std::invalid_argument("interval tree: hi < lo");
    if (n_ == 0) return;
    std::vector<std::size_t> all(n_);
    for (std::size_t i = 0; i < n_; ++i) all[i] = i;
    root_ = build(std::move(all));
}

int IntervalTree::build(std::vector<std::size_t> items) {
    if (items.empty()) return -1;
    std::vector<double> endpoints;
    endpoints.reserve(2 * items.size());
    for (std::size_t i : items) {
        endpoints.push_back(iv_[i].first);
        endpoints.push_back(iv_[i].second);
    }
    std::nth_element(endpoints.begin(), endpoints.begin() + endpoints.size() / 2, endpoints.end());
    double center = endpoints[endpoints.size() / 2];

    std::vector<std::size_t> here, left, right;
    for (std::size_t i : items) {
        if (iv_[i].second < center) left.push_back(i);
        else if (iv_[i].first > center) right.push_back(i);
        else here.push_back(i);
    }
    // guard against degenerate splits (all intervals equal)
    if (here.empty() && (left.empty() || right.empty())) {
        here = std::move(left.empty() ? right : left);
        left.clear();
        right.clear();
    }
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[id].center = center;
    nodes_[id].by_lo = here;
    std::sort(nodes_[id].by_lo.begin(), nodes_[id].by_lo.end(),
              [&](std::size_t a, std::size_t b) { return iv_[a].first < iv_[b].first; });
    nodes_[id].by_hi = here;
    std::sort(nodes_[id].by_hi.begin(), nodes_[id].by_hi.end(),
              [&](std::size_t a, std::size_t b) { return iv_[a].second > iv_[b].second; });
    int l = build(std::move(left));
    int r = build(std::move(right));
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
}

std::vector<std::size_t> IntervalTree::stab(double y) const {
    std::vector<std::size_t> out;
    int node = root_;
    while (node >= 0) {
        const Node& nd = nodes_[node];
        if (y < nd.center) {
            for (std::size_t i : nd.by_lo) {
                if (iv_[i].first > y) break;
                out.push_back(i);
            }
            node = nd.left;
        } else if (y > nd.center) {
            for (std::size_t i : nd.by_hi) {
                if (iv_[i].second < y) break;
                out.push_back(i);
            }
            node = nd.right;
        } else {
            for (std::size_t i : nd.by_lo) out.push_back(i);
            break;
        }
    }
    return out;
}

// ------------------------------------------------------------- LinkCutForest

LinkCutForest::LinkCutForest(std::size_t n) : nodes_(n) {}

int LinkCutForest::add_node() {
    nodes_.push_back({});
    return static_cast<int>(nodes_.size()) - 1;
}

bool LinkCutForest::is_splay_root(int v) const {
    int f = nodes_[v].fa;
    return f < 0 || (nodes_[f].ch[0] != v && nodes_[f].ch[1] != v);
}

void LinkCutForest::rotate(int v) {
    int f = nodes_[v].fa;
    int g = nodes_[f].fa;
    int side = nodes_[f].ch[1] == v ? 1 : 0;
    if (!is_splay_root(f)) nodes_[g].ch[nodes_[g].ch[1] == f ? 1 : 0] = v;
    nodes_[v].fa = g;
    nodes_[f].ch[side] = nodes_[v].ch[side ^ 1];
    if (nodes_[v].ch[side ^ 1] >= 0) nodes_[nodes_[v].ch[side ^ 1]].fa = f;
    nodes_[v].ch[side ^ 1] = f;
    nodes_[f].fa = v;
    ++rotations_;
}

void LinkCutForest::splay(int v) {
    while (!is_splay_root(v)) {
        int f = nodes_[v].fa;
        if (!is_splay_root(f)) {
            int g = nodes_[f].fa;
            bool zigzig = (nodes_[g].ch[1] == f) == (nodes_[f].ch[1] == v);
            rotate(zigzig ? f : v);
        }
        rotate(v);
    }
}

void LinkCutForest::access(int v) {
    splay(v);
    nodes_[v].ch[1] = -1;
    while (nodes_[v].fa >= 0) {
        int pp = nodes_[v].fa;
        splay(pp);
        nodes_[pp].ch[1] = v;
        splay(v);  // single rotation: v was made a direct child of pp
    }
}

int LinkCutForest::find_root(int v) {
    access(v);
    while (nodes_[v].ch[0] >= 0) v = nodes_[v].ch[0];
    splay(v);
    return v;
}

int LinkCutForest::parent_of(int v) {
    access(v);
    int p = nodes_[v].ch[0];
    if (p < 0) return -1;
    while (nodes_[p].ch[1] >= 0) p = nodes_[p].ch[1];
    splay(p);
    return p;
}

void LinkCutForest::link(int child, int parent) {
    if (child == parent) throw std::invalid_argument("link: self loop");
    if (find_root(child) != child) throw std::invalid_argument("link: child is not a root");
    if (find_root(parent) == child) throw std::invalid_argument("link: would create a cycle");
    access(child);
    nodes_[child].fa = parent;
}

void LinkCutForest::cut(int child) {
    access(child);
    if (nodes_[child].ch[0] < 0) throw std::invalid_argument("cut: node is a root");
    nodes_[nodes_[child].ch[0]].fa = -1;
    nodes_[child].ch[0] = -1;
}

}  // namespace subtraj
