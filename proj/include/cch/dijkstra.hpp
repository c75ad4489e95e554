#pragma once

#include <vector>

#include "cch/dary_heap.hpp"
#include "cch/graph.hpp"
#include "cch/types.hpp"

namespace cch {

// Scratch state for Dijkstra runs. One context per thread; distances of
// untouched vertices stay INFINITE_WEIGHT between runs.
class DijkstraContext {
public:
    explicit DijkstraContext(Vertex num_vertices)
        : dist_(num_vertices, INFINITE_WEIGHT), heap_(num_vertices) {}

    Weight dist(Vertex v) const { return dist_[v]; }
    std::span<const Vertex> settled() const { return settled_; }

    // Runs Dijkstra from s. stop(v, dist) is evaluated after settling v;
    // returning true ends the search, leaving all previously settled vertices
    // exact. Pass a predicate that always returns false for a full search.
    template <typename StopPredicate>
    void run(const Graph& g, Vertex s, StopPredicate&& stop) {
        reset();
        heap_.push_or_decrease(s, 0);
        dist_[s] = 0;
        touched_.push_back(s);
        while (!heap_.empty()) {
            const Vertex v = heap_.pop_min();
            settled_.push_back(v);
            if (stop(v, dist_[v])) break;
            for (EdgeId e = g.first_out(v); e < g.first_out(v + 1); ++e) {
                const Vertex w = g.head(e);
                const Weight candidate = add_weights(dist_[v], g.length(e));
                if (candidate < dist_[w]) {
                    if (dist_[w] == INFINITE_WEIGHT) touched_.push_back(w);
                    dist_[w] = candidate;
                    heap_.push_or_decrease(w, candidate);
                }
            }
        }
    }

    void run(const Graph& g, Vertex s) {
        run(g, s, [](Vertex, Weight) { return false; });
    }

private:
    void reset() {
        for (Vertex v : touched_) dist_[v] = INFINITE_WEIGHT;
        touched_.clear();
        settled_.clear();
        heap_.clear();
    }

    std::vector<Weight> dist_;
    std::vector<Vertex> touched_;
    std::vector<Vertex> settled_;
    DaryHeap heap_;
};

// Convenience wrapper for one-off full searches; returns the distance array.
inline std::vector<Weight> dijkstra(const Graph& g, Vertex s) {
    DijkstraContext ctx(g.num_vertices());
    ctx.run(g, s);
    std::vector<Weight> dist(g.num_vertices(), INFINITE_WEIGHT);
    for (Vertex v = 0; v < g.num_vertices(); ++v) dist[v] = ctx.dist(v);
    return dist;
}

}  // namespace cch
