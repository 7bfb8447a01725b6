#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace subtraj {

/// Static balanced binary tree over leaves sorted by a key. An internal
/// node's canonical subset is the contiguous leaf range below it; any
/// contiguous leaf interval is covered by O(log) canonical nodes.
class RangeTree {
public:
    struct Node {
        std::size_t lo;  // leaf range [lo, hi)
        std::size_t hi;
        int left = -1;
        int right = -1;
    };

    RangeTree() = default;
    explicit RangeTree(std::vector<double> keys);

    bool empty() const { return keys_.empty(); }
    std::size_t leaf_count() const { return keys_.size(); }
    const std::vector<double>& keys() const { return keys_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    int root() const { return root_; }
    std::size_t height() const { return height_; }

    // Minimal canonical cover of the leaves with key in [lo_key, hi_key].
    std::vector<int> cover(double lo_key, double hi_key) const;
    // Same, over a leaf index range [lo, hi).
    std::vector<int> cover_leaves(std::size_t lo, std::size_t hi) const;

    // leaf index range [lo, hi) of keys within [lo_key, hi_key]
    std::pair<std::size_t, std::size_t> leaf_range(double lo_key, double hi_key) const;

private:
    int build(std::size_t lo, std::size_t hi, std::size_t depth);
    void cover_rec(int node, std::size_t lo, std::size_t hi, std::vector<int>& out) const;

    std::vector<double> keys_;
    std::vector<Node> nodes_;
    int root_ = -1;
    std::size_t height_ = 0;
};

/// Per-run blocking structure over vertical cell boundaries: leaf j stores
/// the bottom (p_j) and top (r_j) critical heights of boundary j; internal
/// nodes keep max p and min r so the first boundary blocking a rightward
/// horizontal ray can be found in O(log) time.
class BlockTree {
public:
    enum class Kind { bottom, top };
    struct Hit {
        std::size_t index;
        Kind kind;
    };

    BlockTree() = default;
    // bottoms[j] = y(p_j), tops[j] = y(r_j) for boundary j (sorted by x)
    BlockTree(std::vector<double> bottoms, std::vector<double> tops);

    std::size_t size() const { return bottoms_.size(); }

    // Smallest j > from with y <= bottoms[j] or y >= tops[j]; non-strict
    // comparisons on both sides. pass from = npos-style -1 via from_any.
    std::optional<Hit> first_blocker(std::ptrdiff_t from, double y) const;

private:
    struct Agg {
        double max_bottom = -std::numeric_limits<double>::infinity();
        double min_top = std::numeric_limits<double>::infinity();
    };

    std::vector<double> bottoms_;
    std::vector<double> tops_;
    std::vector<Agg> agg_;      // segment tree, 1-indexed over padded size
    std::size_t tree_size_ = 0; // power of two >= size()
};

/// Static interval tree answering stabbing queries: which stored intervals
/// contain a query value.
class IntervalTree {
public:
    IntervalTree() = default;
    // intervals[i] = [lo, hi]; payload is the index i
    explicit IntervalTree(std::vector<std::pair<double, double>> intervals);

    std::size_t size() const { return n_; }
    std::vector<std::size_t> stab(double y) const;

private:
    struct Node {
        double center;
        int left = -1;
        int right = -1;
        std::vector<std::size_t> by_lo;  // intervals containing center, ascending lo
        std::vector<std::size_t> by_hi;  // same set, descending hi
    };
    int build(std::vector<std::size_t> items);

    std::vector<std::pair<double, double>> iv_;
    std::vector<Node> nodes_;
    int root_ = -1;
    std::size_t n_ = 0;
};

/// Dynamic rooted forest with link/cut/find_root in O(log n) amortized,
/// implemented with splay trees over preferred paths.
class LinkCutForest {
public:
    explicit LinkCutForest(std::size_t n = 0);

    std::size_t size() const { return nodes_.size(); }
    int add_node();

    // Attach root `child` under `parent`. Throws if child is not a root or
    // if the link would create a cycle.
    void link(int child, int parent);
    // Detach `child` from its parent. Throws if child is a root.
    void cut(int child);
    int find_root(int v);
    // Parent in the represented forest, -1 for roots. O(log n) amortized.
    int parent_of(int v);

    std::uint64_t rotations() const { return rotations_; }

private:
    struct Node {
        int ch[2] = {-1, -1};
        int fa = -1;  // splay parent or path-parent
    };
    bool is_splay_root(int v) const;
    void rotate(int v);
    void splay(int v);
    void access(int v);

    std::vector<Node> nodes_;
    std::uint64_t rotations_ = 0;
};

}  // namespace subtraj
