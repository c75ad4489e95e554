#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cch/cch.hpp"
#include "cch/dijkstra.hpp"
#include "cch/graph.hpp"
#include "cch/knn.hpp"
#include "cch/types.hpp"

namespace cch {

// Incremental network expansion: Dijkstra from the source until the k-th
// target is settled. The exact baseline every other k-NN algorithm is
// checked against.
class IneContext {
public:
    explicit IneContext(Vertex num_vertices) : dijkstra_(num_vertices), is_target_(num_vertices, 0) {}

    KnnResult query(const Graph& g, Vertex s, std::span<const Vertex> targets, std::uint32_t k) {
        if (k < 1) throw InternalError("ine_knn: k must be at least 1");
        if (targets.empty()) throw InternalError("ine_knn: empty target set");
        std::size_t distinct = 0;
        for (Vertex t : targets)
            if (!is_target_[t]) {
                is_target_[t] = 1;
                ++distinct;
            }
        const std::size_t wanted = std::min<std::size_t>(k, distinct);
        KnnResult result;
        result.reserve(wanted);
        dijkstra_.run(g, s, [&](Vertex v, Weight dist) {
            if (is_target_[v]) {
                result.push_back({v, dist});
                if (result.size() == wanted) return true;
            }
            return false;
        });
        for (Vertex t : targets) is_target_[t] = 0;
        std::sort(result.begin(), result.end(), [](const KnnEntry& a, const KnnEntry& b) {
            return std::tie(a.distance, a.target) < std::tie(b.distance, b.target);
        });
        return result;
    }

private:
    DijkstraContext dijkstra_;
    std::vector<std::uint8_t> is_target_;
};

inline KnnResult ine_knn(const Graph& g, Vertex s, std::span<const Vertex> targets,
                         std::uint32_t k) {
    IneContext ctx(g.num_vertices());
    return ctx.query(g, s, targets, k);
}

// Bucket entries (distance, target) per vertex, sorted by nondecreasing
// distance (ties by target id). An entry (y, t) at v means v lies in the
// reverse CCH search space of t with label y >= Dist(v, t).
class BucketStore {
public:
    explicit BucketStore(Vertex num_vertices) : buckets_(num_vertices) {}

    std::span<const std::pair<Weight, Vertex>> bucket(Vertex v) const { return buckets_[v]; }
    std::size_t total_entries() const { return total_entries_; }

    void clear() {
        for (Vertex v : touched_) buckets_[v].clear();
        touched_.clear();
        total_entries_ = 0;
    }

    void deposit(Vertex v, Weight distance, Vertex target) {
        if (buckets_[v].empty()) touched_.push_back(v);
        buckets_[v].emplace_back(distance, target);
        ++total_entries_;
    }

    void sort_buckets() {
        for (Vertex v : touched_) std::sort(buckets_[v].begin(), buckets_[v].end());
    }

    // Rough footprint of the selection structure, for reports.
    std::size_t memory_bytes() const {
        return total_entries_ * sizeof(std::pair<Weight, Vertex>) +
               buckets_.size() * sizeof(buckets_[0]);
    }

private:
    std::vector<std::vector<std::pair<Weight, Vertex>>> buckets_;
    std::vector<Vertex> touched_;
    std::size_t total_entries_ = 0;
};

struct BcchOptions {
    // Stall-on-demand pruning for the selection-phase reverse searches;
    // shrinks buckets but is not required for correctness.
    bool stall_on_demand = false;
};

// Selection phase of the bucket-based algorithm on CCHs: one reverse
// elimination tree pass per target, depositing its labels along the root
// path.
inline void bcch_select(SearchContext& ctx, const Cch& cch, std::span<const Vertex> targets,
                        BucketStore& store, const BcchOptions& options = {}) {
    store.clear();
    for (Vertex t : targets) {
        ctx.reverse_label_walk(cch, t, [&](Vertex v, Weight label) {
            if (options.stall_on_demand) {
                for (EdgeId e = cch.up.first[v]; e < cch.up.first[v + 1]; ++e) {
                    const Weight via = add_weights(cch.up.up_weight[e],
                                                   ctx.reverse_label(cch.up.head[e]));
                    if (via < label) return false;  // a shorter v->t path exists upward
                }
            }
            store.deposit(v, label, t);
            return true;
        });
    }
    store.sort_buckets();
}

namespace detail {

// Top-k collector that keeps one entry per target (bucket scans meet the
// same target at many vertices). Values only ever decrease.
class DedupTopK {
public:
    DedupTopK(std::vector<Weight>& best_by_target, std::uint32_t k)
        : best_(best_by_target), k_(k) {}

    ~DedupTopK() {
        for (Vertex t : touched_) best_[t] = INFINITE_WEIGHT;
    }

    Weight bound() const { return top_.size() < k_ ? INFINITE_WEIGHT : top_.back().first; }

    void offer(Vertex target, Weight distance) {
        const Weight previous = best_[target];
        if (distance >= previous) return;
        if (previous == INFINITE_WEIGHT) touched_.push_back(target);
        best_[target] = distance;
        const auto position = std::lower_bound(top_.begin(), top_.end(),
                                               std::make_pair(previous, target));
        if (position != top_.end() && *position == std::make_pair(previous, target))
            top_.erase(position);
        if (top_.size() < k_ || distance < top_.back().first) {
            top_.insert(std::lower_bound(top_.begin(), top_.end(),
                                         std::make_pair(distance, target)),
                        {distance, target});
            if (top_.size() > k_) top_.pop_back();
        }
    }

    KnnResult take_sorted() const {
        KnnResult result;
        result.reserve(top_.size());
        for (const auto& [distance, target] : top_) result.push_back({target, distance});
        return result;
    }

private:
    std::vector<Weight>& best_;
    std::vector<Vertex> touched_;
    std::vector<std::pair<Weight, Vertex>> top_;  // sorted ascending, size <= k
    std::uint32_t k_;
};

}  // namespace detail

// Query state for the bucket-based algorithm; owns the per-target distance
// scratch. One per thread.
class BcchQueryContext {
public:
    explicit BcchQueryContext(Vertex num_vertices)
        : search_(num_vertices), best_by_target_(num_vertices, INFINITE_WEIGHT) {}

    SearchContext& search() { return search_; }

    // Forward elimination tree search from s; scans the bucket of every path
    // vertex in nondecreasing entry order, aborting a scan once x + y cannot
    // beat the k-th best distance seen so far.
    KnnResult query(const Cch& cch, const BucketStore& store, Vertex s, std::uint32_t k) {
        if (k < 1) throw InternalError("bcch_query: k must be at least 1");
        detail::DedupTopK top(best_by_target_, k);
        const auto path = search_.forward_elim_search(cch, s);
        for (Vertex v : path) {
            const Weight x = search_.forward_label(v);
            if (x == INFINITE_WEIGHT) continue;
            for (const auto& [y, t] : store.bucket(v)) {
                const Weight candidate = add_weights(x, y);
                if (candidate >= top.bound()) break;
                top.offer(t, candidate);
            }
        }
        search_.reset_forward();
        return top.take_sorted();
    }

private:
    SearchContext search_;
    std::vector<Weight> best_by_target_;
};

inline KnnResult bcch_query(BcchQueryContext& ctx, const Cch& cch, const BucketStore& store,
                            Vertex s, std::uint32_t k) {
    return ctx.query(cch, store, s, k);
}

}  // namespace cch
