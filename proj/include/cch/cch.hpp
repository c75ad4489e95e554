#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cch/dary_heap.hpp"
#include "cch/graph.hpp"
#include "cch/types.hpp"

namespace cch {

// The CCH search graph H: every input edge in ranked orientation plus all
// contraction shortcuts. Vertex ids equal ranks. Edge (v,w) with v < w
// carries the traversal weight in both directions:
//   up_weight   = weight of v->w,  down_weight = weight of w->v.
// orig_up/orig_down keep the untouched input arc lengths (INFINITE_WEIGHT
// for pure shortcuts and missing one-way directions); customization may only
// lower up_weight/down_weight below them.
struct UpwardGraph {
    std::vector<EdgeId> first;  // size n+1
    std::vector<Vertex> head;   // sorted by rank within each row
    std::vector<Weight> up_weight;
    std::vector<Weight> down_weight;
    std::vector<Weight> orig_up;
    std::vector<Weight> orig_down;

    Vertex num_vertices() const { return static_cast<Vertex>(first.size()) - 1; }
    EdgeId num_edges() const { return static_cast<EdgeId>(head.size()); }
    std::span<const Vertex> neighbors(Vertex v) const {
        return {head.data() + first[v], head.data() + first[v + 1]};
    }

    bool operator==(const UpwardGraph&) const = default;
};

// Chordal supergraph via the elimination game: processing vertices by rank,
// each vertex links its remaining higher neighbors through the lowest one.
// The result satisfies the closure property that the higher neighbors of
// every vertex are pairwise adjacent. Weights are left unset.
inline UpwardGraph contract(const Graph& g) {
    const Vertex n = g.num_vertices();
    std::vector<std::vector<Vertex>> up(n);
    for (Vertex v = 0; v < n; ++v)
        for (Vertex w : g.out_heads(v)) {
            if (v < w) up[v].push_back(w);
            if (w < v) up[w].push_back(v);
        }
    for (auto& row : up) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    std::vector<Vertex> merged;
    for (Vertex v = 0; v < n; ++v) {
        if (up[v].size() < 2) continue;
        const Vertex p = up[v].front();
        merged.clear();
        std::set_union(up[v].begin() + 1, up[v].end(), up[p].begin(), up[p].end(),
                       std::back_inserter(merged));
        up[p].swap(merged);
    }
    UpwardGraph h;
    h.first.resize(n + 1, 0);
    for (Vertex v = 0; v < n; ++v) h.first[v + 1] = h.first[v] + static_cast<EdgeId>(up[v].size());
    h.head.reserve(h.first[n]);
    for (Vertex v = 0; v < n; ++v) h.head.insert(h.head.end(), up[v].begin(), up[v].end());
    h.up_weight.assign(h.num_edges(), INFINITE_WEIGHT);
    h.down_weight.assign(h.num_edges(), INFINITE_WEIGHT);
    h.orig_up.assign(h.num_edges(), INFINITE_WEIGHT);
    h.orig_down.assign(h.num_edges(), INFINITE_WEIGHT);
    return h;
}

namespace detail {

inline EdgeId edge_index(const UpwardGraph& h, Vertex v, Vertex w) {
    const auto row = h.neighbors(v);
    const auto it = std::lower_bound(row.begin(), row.end(), w);
    assert(it != row.end() && *it == w);
    return h.first[v] + static_cast<EdgeId>(it - row.begin());
}

}  // namespace detail

// Basic customization: seed the metric from the input arcs, then relax all
// lower triangles bottom-up. g must be the same permuted graph H was built
// from.
inline void customize(UpwardGraph& h, const Graph& g) {
    const Vertex n = h.num_vertices();
    std::fill(h.orig_up.begin(), h.orig_up.end(), INFINITE_WEIGHT);
    std::fill(h.orig_down.begin(), h.orig_down.end(), INFINITE_WEIGHT);
    for (Vertex v = 0; v < n; ++v)
        for (EdgeId e = g.first_out(v); e < g.first_out(v + 1); ++e) {
            const Vertex w = g.head(e);
            if (v < w) {
                const EdgeId idx = detail::edge_index(h, v, w);
                h.orig_up[idx] = std::min(h.orig_up[idx], g.length(e));
            } else {
                const EdgeId idx = detail::edge_index(h, w, v);
                h.orig_down[idx] = std::min(h.orig_down[idx], g.length(e));
            }
        }
    h.up_weight = h.orig_up;
    h.down_weight = h.orig_down;

    // Lower triangles {v,u,w}, rank(v) < rank(u) < rank(w): when v is
    // processed the edges (v,u) and (v,w) are already final.
    for (Vertex v = 0; v < n; ++v) {
        const EdgeId row_begin = h.first[v], row_end = h.first[v + 1];
        for (EdgeId vu = row_begin; vu < row_end; ++vu) {
            const Vertex u = h.head[vu];
            EdgeId uw = h.first[u];
            const EdgeId u_end = h.first[u + 1];
            for (EdgeId vw = vu + 1; vw < row_end; ++vw) {
                const Vertex w = h.head[vw];
                while (uw < u_end && h.head[uw] < w) ++uw;
                assert(uw < u_end && h.head[uw] == w);  // triangle closure
                const Weight up_via = add_weights(h.down_weight[vu], h.up_weight[vw]);
                if (up_via < h.up_weight[uw]) h.up_weight[uw] = up_via;
                const Weight down_via = add_weights(h.down_weight[vw], h.up_weight[vu]);
                if (down_via < h.down_weight[uw]) h.down_weight[uw] = down_via;
            }
        }
    }
}

// parent(v) = lowest-ranked upward neighbor; the top-ranked vertex is the root.
struct EliminationTree {
    std::vector<Vertex> parent;
    Vertex root = INVALID_VERTEX;

    bool operator==(const EliminationTree&) const = default;
};

inline EliminationTree build_elimination_tree(const UpwardGraph& h) {
    const Vertex n = h.num_vertices();
    EliminationTree tree;
    tree.parent.assign(n, INVALID_VERTEX);
    for (Vertex v = 0; v < n; ++v) {
        const auto row = h.neighbors(v);
        if (!row.empty()) {
            tree.parent[v] = row.front();
        } else {
            assert(v + 1 == n);  // connected input: only the top vertex is parentless
            tree.root = v;
        }
    }
    return tree;
}

// Metric-dependent bundle used by queries: permuted input graph, customized
// search graph and elimination tree.
struct Cch {
    Graph graph;
    UpwardGraph up;
    EliminationTree elim;
};

inline Cch make_cch(Graph permuted_graph) {
    Cch cch;
    cch.up = contract(permuted_graph);
    cch.elim = build_elimination_tree(cch.up);
    cch.graph = std::move(permuted_graph);
    return cch;
}

inline void customize(Cch& cch) { customize(cch.up, cch.graph); }

// Label arrays for elimination tree searches. All labels are INFINITE_WEIGHT
// between operations; forward labels persist from forward_elim_search until
// reset_forward, reverse labels are cleared on the fly. One context per
// thread.
class SearchContext {
public:
    explicit SearchContext(Vertex num_vertices)
        : forward_(num_vertices, INFINITE_WEIGHT), reverse_(num_vertices, INFINITE_WEIGHT) {}

    Weight forward_label(Vertex v) const { return forward_[v]; }
    std::span<const Vertex> forward_path() const { return forward_path_; }

    // Computes forward labels on the root path of s: forward[v] = length of
    // the shortest upward s->v path in H. Returns the path (s first).
    std::span<const Vertex> forward_elim_search(const Cch& cch, Vertex s) {
        assert(forward_path_.empty());
        forward_[s] = 0;
        for (Vertex v = s; v != INVALID_VERTEX; v = cch.elim.parent[v]) {
            forward_path_.push_back(v);
            const Weight label = forward_[v];
            if (label == INFINITE_WEIGHT) continue;
            for (EdgeId e = cch.up.first[v]; e < cch.up.first[v + 1]; ++e) {
                const Weight candidate = add_weights(label, cch.up.up_weight[e]);
                if (candidate < forward_[cch.up.head[e]]) forward_[cch.up.head[e]] = candidate;
            }
        }
        return forward_path_;
    }

    // Reverse elimination tree search seeded with (vertex, offset) pairs, all
    // of which must lie on the root path of start_lowest. Walks that path,
    // combining forward and reverse labels, and re-initializes every reverse
    // label it touches. Returns min over scanned v of forward[v] + reverse[v].
    Weight reverse_elim_search(const Cch& cch, std::span<const std::pair<Vertex, Weight>> init,
                               Vertex start_lowest) {
        for (const auto& [b, offset] : init) reverse_[b] = std::min(reverse_[b], offset);
        Weight best = INFINITE_WEIGHT;
        for (Vertex v = start_lowest; v != INVALID_VERTEX; v = cch.elim.parent[v]) {
            const Weight label = reverse_[v];
            if (label == INFINITE_WEIGHT) continue;
            const Weight via = add_weights(forward_[v], label);
            if (via < best) best = via;
            for (EdgeId e = cch.up.first[v]; e < cch.up.first[v + 1]; ++e) {
                const Weight candidate = add_weights(label, cch.up.down_weight[e]);
                if (candidate < reverse_[cch.up.head[e]]) reverse_[cch.up.head[e]] = candidate;
            }
            reverse_[v] = INFINITE_WEIGHT;
        }
#ifndef NDEBUG
        for (const auto& [b, offset] : init) assert(reverse_[b] == INFINITE_WEIGHT);
#endif
        return best;
    }

    // Reverse search from t with per-vertex control: visit(v, label) is
    // called for every root-path vertex with a finite label and returns
    // whether to relax v's outgoing downward edges (false = stall). Labels
    // are re-initialized on the fly either way.
    template <typename Visitor>
    void reverse_label_walk(const Cch& cch, Vertex t, Visitor&& visit) {
        reverse_[t] = 0;
        for (Vertex v = t; v != INVALID_VERTEX; v = cch.elim.parent[v]) {
            const Weight label = reverse_[v];
            if (label == INFINITE_WEIGHT) continue;
            reverse_[v] = INFINITE_WEIGHT;
            if (!visit(v, label)) continue;
            for (EdgeId e = cch.up.first[v]; e < cch.up.first[v + 1]; ++e) {
                const Weight candidate = add_weights(label, cch.up.down_weight[e]);
                if (candidate < reverse_[cch.up.head[e]]) reverse_[cch.up.head[e]] = candidate;
            }
        }
    }

    Weight reverse_label(Vertex v) const { return reverse_[v]; }

    // Re-initializes the forward labels written by the last forward search.
    void reset_forward() {
        for (Vertex v : forward_path_) forward_[v] = INFINITE_WEIGHT;
        forward_path_.clear();
    }

    // Full-array audit; used by tests to enforce the clean-slate contract.
    bool all_labels_infinite() const {
        const auto is_inf = [](Weight w) { return w == INFINITE_WEIGHT; };
        return std::all_of(forward_.begin(), forward_.end(), is_inf) &&
               std::all_of(reverse_.begin(), reverse_.end(), is_inf) && forward_path_.empty();
    }

private:
    std::vector<Weight> forward_;
    std::vector<Weight> reverse_;
    std::vector<Vertex> forward_path_;
};

// Point-to-point distance with a single reverse search; the standard
// elimination tree query.
inline Weight elim_tree_query(SearchContext& ctx, const Cch& cch, Vertex s, Vertex t) {
    ctx.forward_elim_search(cch, s);
    const std::pair<Vertex, Weight> init[] = {{t, 0}};
    const Weight dist = ctx.reverse_elim_search(cch, init, t);
    ctx.reset_forward();
    return dist;
}

// Scratch state for bidirectional Dijkstra-based CCH queries. Kept separate
// from SearchContext; the two query algorithms must stay independent.
class CchDijkstraContext {
public:
    explicit CchDijkstraContext(Vertex num_vertices)
        : dist_{std::vector<Weight>(num_vertices, INFINITE_WEIGHT),
                std::vector<Weight>(num_vertices, INFINITE_WEIGHT)},
          heap_{DaryHeap(num_vertices), DaryHeap(num_vertices)} {}

    // Bidirectional search on H relaxing only upward edges: forward from s
    // over up_weights, reverse from t over down_weights.
    Weight query(const Cch& cch, Vertex s, Vertex t) {
        for (int side = 0; side < 2; ++side) {
            for (Vertex v : touched_[side]) dist_[side][v] = INFINITE_WEIGHT;
            touched_[side].clear();
            heap_[side].clear();
        }
        settle(0, s, 0);
        settle(1, t, 0);
        Weight best = INFINITE_WEIGHT;
        while (!heap_[0].empty() || !heap_[1].empty()) {
            const int side = heap_[1].empty() ? 0
                             : heap_[0].empty()
                                 ? 1
                                 : (heap_[0].min_key() <= heap_[1].min_key() ? 0 : 1);
            if (heap_[side].min_key() >= best) break;
            const Vertex v = heap_[side].pop_min();
            const Weight label = dist_[side][v];
            best = std::min(best, add_weights(label, dist_[1 - side][v]));
            const auto& weights = side == 0 ? cch.up.up_weight : cch.up.down_weight;
            for (EdgeId e = cch.up.first[v]; e < cch.up.first[v + 1]; ++e)
                settle(side, cch.up.head[e], add_weights(label, weights[e]));
        }
        return best;
    }

private:
    void settle(int side, Vertex v, Weight candidate) {
        if (candidate >= dist_[side][v]) return;
        if (dist_[side][v] == INFINITE_WEIGHT) touched_[side].push_back(v);
        dist_[side][v] = candidate;
        heap_[side].push_or_decrease(v, candidate);
    }

    std::vector<Weight> dist_[2];
    DaryHeap heap_[2];
    std::vector<Vertex> touched_[2];
};

inline Weight cch_dijkstra_query(CchDijkstraContext& ctx, const Cch& cch, Vertex s, Vertex t) {
    return ctx.query(cch, s, t);
}

}  // namespace cch
