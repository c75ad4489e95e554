#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "cch/cch.hpp"
#include "cch/separator_tree.hpp"
#include "cch/types.hpp"

namespace cch {

// Target index for the selection phase: the targets as a sorted array plus a
// prefix-count array of size |V|+1, so any vertex range can report its
// target count in O(1) and its targets as a contiguous slice.
struct TargetIndex {
    std::vector<Vertex> targets;
    std::vector<std::uint32_t> prefix;

    std::uint32_t count_in_range(Vertex l, Vertex r) const { return prefix[r + 1] - prefix[l]; }
    std::span<const Vertex> in_range(Vertex l, Vertex r) const {
        return {targets.data() + prefix[l], targets.data() + prefix[r + 1]};
    }
};

// Builds the index in one pass over V plus one pass over T (duplicates in T
// collapse). The comparison-free construction keeps selection time
// independent of the target count up to the O(|T|) passes.
inline TargetIndex build_target_index(std::span<const Vertex> targets, Vertex num_vertices) {
    if (targets.empty()) throw InternalError("build_target_index: empty target set");
    TargetIndex index;
    index.prefix.assign(num_vertices + 1, 0);
    for (Vertex t : targets) {
        if (t >= num_vertices) throw InternalError("build_target_index: target id out of range");
        index.prefix[t + 1] = 1;
    }
    for (Vertex v = 0; v < num_vertices; ++v) index.prefix[v + 1] += index.prefix[v];
    index.targets.resize(index.prefix[num_vertices]);
    for (Vertex v = 0; v < num_vertices; ++v)
        if (index.prefix[v + 1] != index.prefix[v]) index.targets[index.prefix[v]] = v;
    return index;
}

inline std::pair<std::uint32_t, std::span<const Vertex>> targets_in_range(const TargetIndex& index,
                                                                          Vertex l, Vertex r) {
    if (l > r || r + 1 >= index.prefix.size()) throw InternalError("targets_in_range: bad range");
    return {index.count_in_range(l, r), index.in_range(l, r)};
}

struct KnnEntry {
    Vertex target;
    Weight distance;

    bool operator==(const KnnEntry&) const = default;
};

// Sorted by nondecreasing distance; ties by target id.
using KnnResult = std::vector<KnnEntry>;

// Max-heap of the k closest targets seen so far. While not full it reports
// an infinite bound (the paper's sentinel with key infinity).
class KnnHeap {
public:
    explicit KnnHeap(std::uint32_t k) : k_(k) {}

    Weight bound() const { return heap_.size() < k_ ? INFINITE_WEIGHT : heap_.top().first; }

    void offer(Vertex target, Weight distance) {
        if (heap_.size() < k_) {
            heap_.emplace(distance, target);
        } else if (distance < heap_.top().first) {
            heap_.pop();
            heap_.emplace(distance, target);
        }
    }

    KnnResult take_sorted() {
        KnnResult result;
        result.reserve(heap_.size());
        while (!heap_.empty()) {
            result.push_back({heap_.top().second, heap_.top().first});
            heap_.pop();
        }
        std::sort(result.begin(), result.end(), [](const KnnEntry& a, const KnnEntry& b) {
            return std::tie(a.distance, a.target) < std::tie(b.distance, b.target);
        });
        return result;
    }

private:
    std::uint32_t k_;
    std::priority_queue<std::pair<Weight, Vertex>> heap_;
};

// Boundary of a non-root subgraph G_X: the upward neighborhood of the
// highest-ranked vertex in G_X. entry_offsets[i] is the shortest input arc
// from vertices[i] into the vertex range of G_X (infinite if the boundary
// vertex has no arc into G_X).
struct Boundary {
    std::vector<Vertex> vertices;  // rank-sorted
    Vertex lowest;
    std::vector<Weight> entry_offsets;
};

inline Boundary boundary_of(const Cch& cch, const SepDecompTree& tree, std::uint32_t node_index) {
    const SepDecompNode& node = tree.nodes[node_index];
    if (node.parent == NO_NODE) throw InternalError("boundary_of: the root has no boundary");
    const Vertex top = node.last_vertex;
    const auto row = cch.up.neighbors(top);
    assert(!row.empty());
    Boundary boundary;
    boundary.vertices.assign(row.begin(), row.end());
    boundary.lowest = row.front();
    boundary.entry_offsets.reserve(row.size());
    for (Vertex b : boundary.vertices) {
        Weight best = INFINITE_WEIGHT;
        const auto heads = cch.graph.out_heads(b);
        auto it = std::lower_bound(heads.begin(), heads.end(), node.first_vertex);
        for (; it != heads.end() && *it <= node.last_vertex; ++it) {
            const EdgeId e = cch.graph.first_out(b) + static_cast<EdgeId>(it - heads.begin());
            best = std::min(best, cch.graph.length(e));
        }
        boundary.entry_offsets.push_back(best);
    }
    return boundary;
}

enum class DistMode { LowerBound, Exact };

// Distance from the current forward-search source to the closest vertex of
// G_X, via one reverse search seeded at the boundary. Exact mode seeds the
// entry offsets and returns Dist(s, X) precisely; lower-bound mode seeds
// zeros, which is cheaper to beat and never overestimates. The source must
// lie outside G_X.
inline Weight dist_to_subgraph(SearchContext& ctx, const Cch& cch, const SepDecompTree& tree,
                               std::uint32_t node_index, DistMode mode) {
    const Boundary boundary = boundary_of(cch, tree, node_index);
    std::vector<std::pair<Vertex, Weight>> init;
    init.reserve(boundary.vertices.size());
    for (std::size_t i = 0; i < boundary.vertices.size(); ++i) {
        const Weight offset = mode == DistMode::Exact ? boundary.entry_offsets[i] : 0;
        if (offset != INFINITE_WEIGHT) init.emplace_back(boundary.vertices[i], offset);
    }
    return ctx.reverse_elim_search(cch, init, boundary.lowest);
}

struct KnnOptions {
    DistMode mode = DistMode::LowerBound;
    std::uint32_t recursion_threshold = 8;
};

// Prune records for instrumented runs; tests verify pruned subtrees against
// an oracle.
struct KnnInstrumentation {
    struct PrunedChild {
        std::uint32_t node;
        Weight subgraph_dist;
        Weight bound;
    };
    std::vector<PrunedChild> pruned;
};

namespace detail {

inline void knn_search_node(SearchContext& ctx, const Cch& cch, const SepDecompTree& tree,
                            const TargetIndex& index, Vertex s, std::uint32_t node_index,
                            KnnHeap& heap, const KnnOptions& options,
                            KnnInstrumentation* instrumentation) {
    const SepDecompNode& node = tree.nodes[node_index];
    const auto examine = [&](Vertex t) {
        const std::pair<Vertex, Weight> init[] = {{t, 0}};
        heap.offer(t, ctx.reverse_elim_search(cch, init, t));
    };

    const auto [count, slice] = targets_in_range(index, node.first_vertex, node.last_vertex);
    if (count <= options.recursion_threshold) {
        for (Vertex t : slice) examine(t);
        return;
    }
    for (Vertex t : index.in_range(node.first_sep_vertex, node.last_vertex)) examine(t);

    std::vector<std::pair<Weight, std::uint32_t>> ordered_children;
    for (std::uint32_t child = node.first_child; child < node.first_child + node.num_children;
         ++child) {
        const SepDecompNode& y = tree.nodes[child];
        if (index.count_in_range(y.first_vertex, y.last_vertex) == 0) continue;
        const bool contains_source = y.first_vertex <= s && s <= y.last_vertex;
        const Weight dist =
            contains_source ? 0 : dist_to_subgraph(ctx, cch, tree, child, options.mode);
        ordered_children.emplace_back(dist, child);
    }
    std::sort(ordered_children.begin(), ordered_children.end());
    for (const auto& [dist, child] : ordered_children) {
        if (dist < heap.bound())
            knn_search_node(ctx, cch, tree, index, s, child, heap, options, instrumentation);
        else if (instrumentation)
            instrumentation->pruned.push_back({child, dist, heap.bound()});
    }
}

}  // namespace detail

// The separator decomposition k-nearest-neighbor query: one shared forward
// search, then a systematic exploration of the tree that examines separator
// targets, orders children by their subgraph distance and prunes against the
// k-th best distance seen so far. Returns min(k, |T|) targets with exact
// distances; the context is clean afterwards.
inline KnnResult knn_query(SearchContext& ctx, const Cch& cch, const SepDecompTree& tree,
                           const TargetIndex& index, Vertex s, std::uint32_t k,
                           const KnnOptions& options = {},
                           KnnInstrumentation* instrumentation = nullptr) {
    if (k < 1) throw InternalError("knn_query: k must be at least 1");
    if (index.targets.empty()) throw InternalError("knn_query: empty target index");
    ctx.forward_elim_search(cch, s);
    KnnHeap heap(k);
    detail::knn_search_node(ctx, cch, tree, index, s, 0, heap, options, instrumentation);
    ctx.reset_forward();
    return heap.take_sorted();
}

}  // namespace cch
