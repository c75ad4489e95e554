#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

#include "cch/types.hpp"

namespace cch {

// Directed graph in adjacency-array (CSR) form. A bidirected road segment is
// two arcs; a one-way segment has no reverse arc. Immutable after construction.
class Graph {
public:
    Graph() = default;

    // Builds from an arc list. Parallel arcs collapse to the minimum length,
    // self-loops are dropped. Heads are sorted per vertex.
    Graph(Vertex num_vertices, std::vector<std::tuple<Vertex, Vertex, Weight>> arcs)
        : first_out_(num_vertices + 1, 0) {
        std::sort(arcs.begin(), arcs.end());
        std::vector<std::tuple<Vertex, Vertex, Weight>> unique_arcs;
        unique_arcs.reserve(arcs.size());
        for (const auto& arc : arcs) {
            const auto [tail, head, length] = arc;
            assert(tail < num_vertices && head < num_vertices);
            if (tail == head) continue;
            if (!unique_arcs.empty() && std::get<0>(unique_arcs.back()) == tail &&
                std::get<1>(unique_arcs.back()) == head)
                continue;  // sorted, so the first occurrence carries the minimum length
            unique_arcs.push_back(arc);
        }
        head_.reserve(unique_arcs.size());
        length_.reserve(unique_arcs.size());
        for (const auto& [tail, head, length] : unique_arcs) {
            ++first_out_[tail + 1];
            head_.push_back(head);
            length_.push_back(length);
        }
        for (Vertex v = 0; v < num_vertices; ++v) first_out_[v + 1] += first_out_[v];
    }

    // Restores a graph from adjacency arrays (e.g. a binary file). Rows must
    // already be sorted by head and free of duplicates and self-loops.
    static Graph from_csr(std::vector<EdgeId> first_out, std::vector<Vertex> head,
                          std::vector<Weight> length) {
        if (first_out.empty() || first_out.front() != 0 || first_out.back() != head.size() ||
            head.size() != length.size())
            throw ParseError("corrupt adjacency arrays");
        Graph g;
        g.first_out_ = std::move(first_out);
        g.head_ = std::move(head);
        g.length_ = std::move(length);
        const Vertex n = g.num_vertices();
        for (Vertex v = 0; v < n; ++v) {
            const auto row = g.out_heads(v);
            for (std::size_t i = 0; i < row.size(); ++i)
                if (row[i] >= n || row[i] == v || (i > 0 && row[i - 1] >= row[i]))
                    throw ParseError("corrupt adjacency arrays");
        }
        return g;
    }

    Vertex num_vertices() const { return static_cast<Vertex>(first_out_.size()) - 1; }
    EdgeId num_arcs() const { return static_cast<EdgeId>(head_.size()); }

    std::span<const Vertex> out_heads(Vertex v) const {
        return {head_.data() + first_out_[v], head_.data() + first_out_[v + 1]};
    }
    EdgeId first_out(Vertex v) const { return first_out_[v]; }
    Vertex head(EdgeId e) const { return head_[e]; }
    Weight length(EdgeId e) const { return length_[e]; }

    // Length of the arc v->w, INFINITE_WEIGHT if absent.
    Weight arc_length(Vertex v, Vertex w) const {
        const auto heads = out_heads(v);
        const auto it = std::lower_bound(heads.begin(), heads.end(), w);
        if (it == heads.end() || *it != w) return INFINITE_WEIGHT;
        return length_[first_out_[v] + static_cast<EdgeId>(it - heads.begin())];
    }

    void set_length(EdgeId e, Weight length) { length_[e] = length; }

    bool operator==(const Graph& other) const = default;

    // Adjacency of the undirected skeleton (arc in either direction), without
    // self-loops or duplicates. Used by partitioning and contraction.
    std::vector<std::vector<Vertex>> undirected_adjacency() const {
        std::vector<std::vector<Vertex>> adj(num_vertices());
        for (Vertex v = 0; v < num_vertices(); ++v)
            for (Vertex w : out_heads(v)) {
                adj[v].push_back(w);
                adj[w].push_back(v);
            }
        for (auto& neighbors : adj) {
            std::sort(neighbors.begin(), neighbors.end());
            neighbors.erase(std::unique(neighbors.begin(), neighbors.end()), neighbors.end());
        }
        return adj;
    }

private:
    std::vector<EdgeId> first_out_{0};
    std::vector<Vertex> head_;
    std::vector<Weight> length_;
};

// Per-vertex planar coordinates, fixed-point integers (DIMACS: degrees * 10^6,
// x = longitude, y = latitude).
struct Coordinates {
    std::vector<std::int32_t> x;
    std::vector<std::int32_t> y;

    std::size_t size() const { return x.size(); }
    bool operator==(const Coordinates&) const = default;
};

// Relabels vertices so that output vertex rank[v] is input vertex v.
inline std::pair<Graph, Coordinates> permute(const Graph& g, const Coordinates& c,
                                             std::span<const Vertex> rank) {
    const Vertex n = g.num_vertices();
    if (rank.size() != n) throw InternalError("permute: order size mismatch");
    std::vector<bool> seen(n, false);
    for (Vertex r : rank) {
        if (r >= n || seen[r]) throw InternalError("permute: order is not a permutation");
        seen[r] = true;
    }
    std::vector<std::tuple<Vertex, Vertex, Weight>> arcs;
    arcs.reserve(g.num_arcs());
    for (Vertex v = 0; v < n; ++v)
        for (EdgeId e = g.first_out(v); e < g.first_out(v + 1); ++e)
            arcs.emplace_back(rank[v], rank[g.head(e)], g.length(e));
    Coordinates pc;
    pc.x.resize(n);
    pc.y.resize(n);
    for (Vertex v = 0; v < n; ++v) {
        pc.x[rank[v]] = c.x[v];
        pc.y[rank[v]] = c.y[v];
    }
    return {Graph(n, std::move(arcs)), std::move(pc)};
}

namespace detail {

// Iterative Tarjan SCC. Returns the component id per vertex; ids are in
// reverse topological order of the condensation, which we do not rely on.
inline std::vector<std::uint32_t> tarjan_components(const Graph& g, std::uint32_t& num_components) {
    const Vertex n = g.num_vertices();
    constexpr std::uint32_t UNSET = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> index(n, UNSET), lowlink(n), component(n, UNSET);
    std::vector<Vertex> stack;
    std::vector<bool> on_stack(n, false);
    std::uint32_t next_index = 0;
    num_components = 0;

    struct Frame {
        Vertex v;
        EdgeId next_arc;
    };
    std::vector<Frame> call_stack;

    for (Vertex root = 0; root < n; ++root) {
        if (index[root] != UNSET) continue;
        call_stack.push_back({root, g.first_out(root)});
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call_stack.empty()) {
            Frame& frame = call_stack.back();
            const Vertex v = frame.v;
            if (frame.next_arc < g.first_out(v + 1)) {
                const Vertex w = g.head(frame.next_arc++);
                if (index[w] == UNSET) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call_stack.push_back({w, g.first_out(w)});
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
            } else {
                if (lowlink[v] == index[v]) {
                    while (true) {
                        const Vertex w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        component[w] = num_components;
                        if (w == v) break;
                    }
                    ++num_components;
                }
                call_stack.pop_back();
                if (!call_stack.empty())
                    lowlink[call_stack.back().v] = std::min(lowlink[call_stack.back().v], lowlink[v]);
            }
        }
    }
    return component;
}

}  // namespace detail

struct SccResult {
    Graph graph;
    Coordinates coordinates;
    std::vector<Vertex> to_old;  // new id -> id in the input graph
};

// Induced subgraph on the largest strongly connected component. New ids are
// assigned in ascending order of old id.
inline SccResult largest_scc(const Graph& g, const Coordinates& c) {
    const Vertex n = g.num_vertices();
    if (n == 0) throw InternalError("largest_scc: empty graph");
    std::uint32_t num_components = 0;
    const auto component = detail::tarjan_components(g, num_components);
    std::vector<std::uint32_t> component_size(num_components, 0);
    for (Vertex v = 0; v < n; ++v) ++component_size[component[v]];
    const std::uint32_t max_size =
        *std::max_element(component_size.begin(), component_size.end());
    // Ties go to the component containing the smallest vertex id.
    std::uint32_t largest = 0;
    for (Vertex v = 0; v < n; ++v)
        if (component_size[component[v]] == max_size) {
            largest = component[v];
            break;
        }

    std::vector<Vertex> to_old;
    std::vector<Vertex> to_new(n, INVALID_VERTEX);
    for (Vertex v = 0; v < n; ++v)
        if (component[v] == largest) {
            to_new[v] = static_cast<Vertex>(to_old.size());
            to_old.push_back(v);
        }
    std::vector<std::tuple<Vertex, Vertex, Weight>> arcs;
    for (Vertex v = 0; v < n; ++v) {
        if (to_new[v] == INVALID_VERTEX) continue;
        for (EdgeId e = g.first_out(v); e < g.first_out(v + 1); ++e)
            if (to_new[g.head(e)] != INVALID_VERTEX)
                arcs.emplace_back(to_new[v], to_new[g.head(e)], g.length(e));
    }
    Coordinates sc;
    sc.x.reserve(to_old.size());
    sc.y.reserve(to_old.size());
    for (Vertex old : to_old) {
        sc.x.push_back(c.x[old]);
        sc.y.push_back(c.y[old]);
    }
    return {Graph(static_cast<Vertex>(to_old.size()), std::move(arcs)), std::move(sc),
            std::move(to_old)};
}

}  // namespace cch
