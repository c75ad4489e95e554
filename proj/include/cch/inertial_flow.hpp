#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

#include "cch/graph.hpp"
#include "cch/types.hpp"

namespace cch {

struct VertexCut {
    std::vector<Vertex> side_a;
    std::vector<Vertex> side_b;
    std::vector<Vertex> separator;
};

namespace detail {

// Dinic on a vertex-split network: each free vertex becomes a unit-capacity
// in->out arc, skeleton edges become infinite arcs, sources/sinks bypass
// their own split arc. The max flow equals the minimum vertex cut between
// the fixed sets, provided no source is adjacent to a sink.
class VertexCutMaxFlow {
    static constexpr std::int32_t INF_CAP = 1 << 30;

    struct Arc {
        std::uint32_t to;
        std::uint32_t rev;
        std::int32_t cap;
    };

public:
    // local ids 0..m-1; adjacency is symmetric. Returns the cut size, or -1
    // if no vertex cut separates the fixed sets.
    std::int64_t run(const std::vector<std::vector<std::uint32_t>>& adjacency,
                     std::span<const std::uint32_t> sources,
                     std::span<const std::uint32_t> sinks) {
        const std::uint32_t m = static_cast<std::uint32_t>(adjacency.size());
        source_ = 2 * m;
        sink_ = 2 * m + 1;
        graph_.assign(2 * m + 2, {});
        std::vector<std::uint8_t> is_source(m, 0), is_sink(m, 0);
        for (std::uint32_t v : sources) is_source[v] = 1;
        for (std::uint32_t v : sinks) is_sink[v] = 1;
        for (std::uint32_t v : sources)
            for (std::uint32_t w : adjacency[v])
                if (is_sink[w]) return -1;

        for (std::uint32_t v = 0; v < m; ++v) {
            if (!is_source[v] && !is_sink[v]) add_arc(in_node(v), out_node(v), 1);
            for (std::uint32_t w : adjacency[v]) add_arc(out_node(v), in_node(w), INF_CAP);
        }
        for (std::uint32_t v : sources) add_arc(source_, out_node(v), INF_CAP);
        for (std::uint32_t v : sinks) add_arc(in_node(v), sink_, INF_CAP);

        std::int64_t flow = 0;
        while (build_levels()) {
            arc_cursor_.assign(graph_.size(), 0);
            flow += blocking_flow();
        }
        return flow;
    }

    // After run(): vertices whose in-node is residual-reachable but whose
    // out-node is not form the minimum cut.
    std::vector<std::uint32_t> extract_cut(std::uint32_t m) const {
        std::vector<std::uint32_t> cut;
        for (std::uint32_t v = 0; v < m; ++v)
            if (level_[in_node(v)] >= 0 && level_[out_node(v)] < 0) cut.push_back(v);
        return cut;
    }

private:
    static std::uint32_t in_node(std::uint32_t v) { return 2 * v; }
    static std::uint32_t out_node(std::uint32_t v) { return 2 * v + 1; }

    void add_arc(std::uint32_t from, std::uint32_t to, std::int32_t cap) {
        graph_[from].push_back({to, static_cast<std::uint32_t>(graph_[to].size()), cap});
        graph_[to].push_back({from, static_cast<std::uint32_t>(graph_[from].size()) - 1, 0});
    }

    bool build_levels() {
        level_.assign(graph_.size(), -1);
        bfs_queue_.clear();
        level_[source_] = 0;
        bfs_queue_.push_back(source_);
        for (std::size_t i = 0; i < bfs_queue_.size(); ++i) {
            const std::uint32_t v = bfs_queue_[i];
            for (const Arc& arc : graph_[v])
                if (arc.cap > 0 && level_[arc.to] < 0) {
                    level_[arc.to] = level_[v] + 1;
                    bfs_queue_.push_back(arc.to);
                }
        }
        return level_[sink_] >= 0;
    }

    // Iterative blocking flow (explicit path stack, so long level graphs
    // cannot overflow the call stack).
    std::int64_t blocking_flow() {
        std::int64_t total = 0;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> path;  // (tail, arc index)
        std::uint32_t v = source_;
        while (true) {
            if (v == sink_) {
                std::int32_t bottleneck = INF_CAP;
                for (const auto& [tail, idx] : path)
                    bottleneck = std::min(bottleneck, graph_[tail][idx].cap);
                std::size_t first_saturated = path.size();
                for (std::size_t i = 0; i < path.size(); ++i) {
                    Arc& arc = graph_[path[i].first][path[i].second];
                    arc.cap -= bottleneck;
                    graph_[arc.to][arc.rev].cap += bottleneck;
                    if (arc.cap == 0 && first_saturated == path.size()) first_saturated = i;
                }
                total += bottleneck;
                v = path[first_saturated].first;
                path.resize(first_saturated);
                continue;
            }
            bool advanced = false;
            while (arc_cursor_[v] < graph_[v].size()) {
                const Arc& arc = graph_[v][arc_cursor_[v]];
                if (arc.cap > 0 && level_[arc.to] == level_[v] + 1) {
                    path.emplace_back(v, arc_cursor_[v]);
                    v = arc.to;
                    advanced = true;
                    break;
                }
                ++arc_cursor_[v];
            }
            if (!advanced) {
                level_[v] = -1;
                if (v == source_) break;
                v = path.back().first;
                path.pop_back();
                ++arc_cursor_[v];
            }
        }
        return total;
    }

    std::vector<std::vector<Arc>> graph_;
    std::vector<std::int32_t> level_;
    std::vector<std::uint32_t> bfs_queue_;
    std::vector<std::uint32_t> arc_cursor_;
    std::uint32_t source_ = 0, sink_ = 0;
};

}  // namespace detail

// Recursive-dissection cutter. References a caller-owned undirected skeleton
// and keeps scratch state so repeated cuts on subsets do not reallocate the
// world.
class InertialFlowCutter {
public:
    InertialFlowCutter(const std::vector<std::vector<Vertex>>& skeleton,
                       const Coordinates& coordinates, double balance)
        : skeleton_(&skeleton),
          coordinates_(&coordinates),
          balance_(balance),
          local_id_(skeleton.size(), INVALID_VERTEX) {}

    // Cuts the induced subgraph on `subset` (sorted global ids). The returned
    // separator is a minimum vertex cut over the four projection directions;
    // both sides hold at least floor(balance * n) vertices. If no vertex cut
    // exists (tiny or dense subsets), falls back to a median split with an
    // empty separator.
    VertexCut cut(std::span<const Vertex> subset) {
        const std::size_t n = subset.size();
        if (n < 2) throw InternalError("inertial_flow_cut: subset smaller than 2 vertices");

        for (std::size_t i = 0; i < n; ++i) local_id_[subset[i]] = static_cast<Vertex>(i);
        std::vector<std::vector<std::uint32_t>> local_adj(n);
        for (std::size_t i = 0; i < n; ++i)
            for (Vertex w : (*skeleton_)[subset[i]])
                if (local_id_[w] != INVALID_VERTEX) local_adj[i].push_back(local_id_[w]);

        const std::size_t want_fixed = static_cast<std::size_t>(balance_ * static_cast<double>(n));
        VertexCut best;
        bool have_cut = false;
        std::int64_t best_size = 0;
        for (std::size_t num_fixed = std::max<std::size_t>(want_fixed, 1); num_fixed >= 1;
             num_fixed /= 2) {
            for (int direction = 0; direction < 4; ++direction) {
                const auto order = project(subset, direction);
                std::vector<std::uint32_t> sources(order.begin(), order.begin() + num_fixed);
                std::vector<std::uint32_t> sinks(order.end() - num_fixed, order.end());
                detail::VertexCutMaxFlow max_flow;
                const std::int64_t size = max_flow.run(local_adj, sources, sinks);
                if (size < 0) continue;
                if (!have_cut || size < best_size) {
                    have_cut = true;
                    best_size = size;
                    best = assemble(subset, local_adj, max_flow.extract_cut(static_cast<Vertex>(n)),
                                    sources);
                }
            }
            if (have_cut) break;
            if (num_fixed == 1) break;
        }
        for (Vertex v : subset) local_id_[v] = INVALID_VERTEX;

        if (!have_cut) return median_split(subset);
        slide_to_balance(best, local_adj, subset,
                         std::min(want_fixed, (n - best.separator.size()) / 2));
        to_global(best, subset);
        return best;
    }

private:
    // Projection keys: S->N, W->E, SW->NE, SE->NW. Returns local ids sorted
    // by (key, global id) so runs are reproducible.
    std::vector<std::uint32_t> project(std::span<const Vertex> subset, int direction) const {
        const std::size_t n = subset.size();
        std::vector<std::uint32_t> order(n);
        std::vector<std::int64_t> key(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::int64_t x = coordinates_->x[subset[i]];
            const std::int64_t y = coordinates_->y[subset[i]];
            switch (direction) {
                case 0: key[i] = y; break;
                case 1: key[i] = x; break;
                case 2: key[i] = x + y; break;
                default: key[i] = x - y; break;
            }
            order[i] = static_cast<std::uint32_t>(i);
        }
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            return std::tie(key[a], subset[a]) < std::tie(key[b], subset[b]);
        });
        return order;
    }

    // Builds the cut in local ids: side A is everything reachable from the
    // sources once the separator is removed.
    VertexCut assemble(std::span<const Vertex> subset,
                       const std::vector<std::vector<std::uint32_t>>& local_adj,
                       std::vector<std::uint32_t> separator,
                       std::span<const std::uint32_t> sources) const {
        const std::size_t n = subset.size();
        std::vector<std::uint8_t> in_sep(n, 0), in_a(n, 0);
        for (std::uint32_t v : separator) in_sep[v] = 1;
        std::vector<std::uint32_t> queue;
        for (std::uint32_t s : sources)
            if (!in_sep[s] && !in_a[s]) {
                in_a[s] = 1;
                queue.push_back(s);
            }
        for (std::size_t i = 0; i < queue.size(); ++i)
            for (std::uint32_t w : local_adj[queue[i]])
                if (!in_sep[w] && !in_a[w]) {
                    in_a[w] = 1;
                    queue.push_back(w);
                }
        VertexCut cut;
        cut.separator = std::move(separator);
        for (std::uint32_t v = 0; v < n; ++v) {
            if (in_sep[v]) continue;
            (in_a[v] ? cut.side_a : cut.side_b).push_back(v);
        }
        return cut;
    }

    // Moves the separator toward the larger side while the cut stays minimum,
    // shrinking the imbalance. Keeps both sides at >= min_side vertices.
    void slide_to_balance(VertexCut& cut, const std::vector<std::vector<std::uint32_t>>& local_adj,
                          std::span<const Vertex> subset, std::size_t min_side) const {
        const std::size_t n = subset.size();
        std::vector<std::uint8_t> membership(n);  // 0 = side A, 1 = side B, 2 = separator
        for (std::uint32_t v : cut.side_b) membership[v] = 1;
        for (std::uint32_t v : cut.separator) membership[v] = 2;
        while (true) {
            const bool grow_a = cut.side_a.size() < cut.side_b.size();
            auto& growing = grow_a ? cut.side_a : cut.side_b;
            auto& shrinking = grow_a ? cut.side_b : cut.side_a;
            const std::uint8_t shrink_tag = grow_a ? 1 : 0;
            std::vector<std::uint32_t> frontier;
            for (std::uint32_t v : cut.separator)
                for (std::uint32_t w : local_adj[v])
                    if (membership[w] == shrink_tag) {
                        membership[w] = 3;  // tentative new separator
                        frontier.push_back(w);
                    }
            const std::size_t new_shrink_size = shrinking.size() - frontier.size();
            const std::size_t new_grow_size = growing.size() + cut.separator.size();
            const bool improves =
                std::max(new_grow_size, new_shrink_size) < std::max(growing.size(), shrinking.size());
            if (frontier.size() > cut.separator.size() || !improves ||
                new_shrink_size < std::max<std::size_t>(min_side, 1)) {
                for (std::uint32_t w : frontier) membership[w] = shrink_tag;
                return;
            }
            const std::uint8_t grow_tag = grow_a ? 0 : 1;
            for (std::uint32_t v : cut.separator) membership[v] = grow_tag;
            growing.insert(growing.end(), cut.separator.begin(), cut.separator.end());
            cut.separator = frontier;
            for (std::uint32_t v : cut.separator) membership[v] = 2;
            std::vector<std::uint32_t> remaining;
            remaining.reserve(new_shrink_size);
            for (std::uint32_t v : shrinking)
                if (membership[v] == shrink_tag) remaining.push_back(v);
            shrinking = std::move(remaining);
        }
    }

    // Degenerate fallback when no vertex cut exists: split at the median of
    // the first projection direction. The separator is empty; callers treat
    // such components as indivisible.
    VertexCut median_split(std::span<const Vertex> subset) const {
        const auto order = project(subset, 0);
        VertexCut cut;
        const std::size_t half = (subset.size() + 1) / 2;
        for (std::size_t i = 0; i < order.size(); ++i)
            (i < half ? cut.side_a : cut.side_b).push_back(order[i]);
        to_global(cut, subset);
        return cut;
    }

    static void to_global(VertexCut& cut, std::span<const Vertex> subset) {
        for (auto* part : {&cut.side_a, &cut.side_b, &cut.separator}) {
            for (std::uint32_t& v : *part) v = subset[v];
            std::sort(part->begin(), part->end());
        }
    }

    const std::vector<std::vector<Vertex>>* skeleton_;
    const Coordinates* coordinates_;
    double balance_;
    std::vector<Vertex> local_id_;
};

// One-off cut of a vertex subset; see InertialFlowCutter for repeated use.
inline VertexCut inertial_flow_cut(const Graph& g, const Coordinates& c,
                                   std::span<const Vertex> subset, double balance) {
    const auto skeleton = g.undirected_adjacency();
    InertialFlowCutter cutter(skeleton, c, balance);
    return cutter.cut(subset);
}

}  // namespace cch
