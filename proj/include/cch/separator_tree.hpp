#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "cch/graph.hpp"
#include "cch/inertial_flow.hpp"
#include "cch/types.hpp"

namespace cch {

// One node of the separator decomposition. Vertex bounds are indices into
// the nested dissection order (i.e. ids of the permuted graph):
//   [first_vertex, last_vertex]      = V(G_X)
//   [first_sep_vertex, last_vertex]  = the separator X itself
// Children occupy [first_child, first_child + num_children) in the node
// array and their vertex ranges tile [first_vertex, first_sep_vertex - 1].
struct SepDecompNode {
    std::uint32_t parent;
    std::uint32_t first_child;
    std::uint32_t num_children;
    Vertex first_vertex;
    Vertex last_vertex;
    Vertex first_sep_vertex;

    bool is_leaf() const { return num_children == 0; }
    bool operator==(const SepDecompNode&) const = default;
};

inline constexpr std::uint32_t NO_NODE = std::numeric_limits<std::uint32_t>::max();

struct SepDecompTree {
    std::vector<SepDecompNode> nodes;  // nodes[0] is the root

    std::uint32_t num_nodes() const { return static_cast<std::uint32_t>(nodes.size()); }
    const SepDecompNode& root() const { return nodes.front(); }

    std::span<const SepDecompNode> children(const SepDecompNode& x) const {
        return {nodes.data() + x.first_child, x.num_children};
    }

    // The unique node whose separator contains v.
    std::uint32_t node_of_vertex(Vertex v) const {
        std::uint32_t current = 0;
        while (true) {
            const SepDecompNode& x = nodes[current];
            if (v >= x.first_sep_vertex) return current;
            // children are ordered by first_vertex; find the one covering v
            std::uint32_t lo = x.first_child, hi = x.first_child + x.num_children;
            while (lo + 1 < hi) {
                const std::uint32_t mid = lo + (hi - lo) / 2;
                if (nodes[mid].first_vertex <= v)
                    lo = mid;
                else
                    hi = mid;
            }
            current = lo;
        }
    }

    bool operator==(const SepDecompTree&) const = default;
};

// Rank permutation induced by a postorder walk of the separator decomposition.
struct NestedDissectionOrder {
    std::vector<Vertex> rank;   // input vertex -> rank
    std::vector<Vertex> order;  // rank -> input vertex
};

struct Dissection {
    SepDecompTree tree;
    NestedDissectionOrder order;
    Graph graph;              // input graph relabeled by rank
    Coordinates coordinates;  // likewise
};

// Recursive Inertial Flow dissection: components of more than leaf_threshold
// vertices are cut; each resulting connected component becomes a child.
// Separator vertices are ranked above their subtrees, ordered by input id.
inline Dissection build_sep_decomposition(const Graph& g, const Coordinates& c,
                                          Vertex leaf_threshold = 32, double balance = 0.3) {
    const Vertex n = g.num_vertices();
    if (n == 0) throw InternalError("build_sep_decomposition: empty graph");
    auto skeleton = g.undirected_adjacency();
    std::vector<std::uint8_t> active(n, 0);  // scratch for component BFS

    Dissection result;
    result.order.rank.assign(n, INVALID_VERTEX);
    auto& nodes = result.tree.nodes;

    struct WorkItem {
        std::uint32_t node;
        std::vector<Vertex> subset;  // sorted input ids
        Vertex rank_base;
    };
    std::vector<WorkItem> queue;
    {
        std::vector<Vertex> all(n);
        for (Vertex v = 0; v < n; ++v) all[v] = v;
        nodes.push_back({NO_NODE, 0, 0, 0, n - 1, 0});
        queue.push_back({0, std::move(all), 0});
    }
    InertialFlowCutter cutter(skeleton, c, balance);

    const auto make_separator = [&](std::uint32_t node_idx, std::span<const Vertex> sep,
                                    Vertex rank_base) {
        // sep is sorted by input id; ranks ascend with id inside the separator
        for (std::size_t i = 0; i < sep.size(); ++i)
            result.order.rank[sep[i]] = rank_base + static_cast<Vertex>(i);
        nodes[node_idx].first_sep_vertex = rank_base;
    };

    for (std::size_t next = 0; next < queue.size(); ++next) {
        // Move the item out: growing `nodes`/`queue` may reallocate.
        WorkItem item = std::move(queue[next]);
        const std::uint32_t node_idx = item.node;
        const Vertex size = static_cast<Vertex>(item.subset.size());

        VertexCut cut;
        if (size > std::max<Vertex>(leaf_threshold, 1))
            cut = cutter.cut(item.subset);
        if (cut.separator.empty()) {
            // leaf: the node contains all of its vertices
            make_separator(node_idx, item.subset, item.rank_base);
            continue;
        }

        // children = connected components of the subset minus the separator
        for (Vertex v : item.subset) active[v] = 1;
        for (Vertex v : cut.separator) active[v] = 0;
        std::vector<std::vector<Vertex>> components;
        std::vector<Vertex> bfs;
        for (Vertex v : item.subset) {
            if (!active[v]) continue;
            bfs.clear();
            bfs.push_back(v);
            active[v] = 0;
            for (std::size_t i = 0; i < bfs.size(); ++i)
                for (Vertex w : skeleton[bfs[i]])
                    if (active[w]) {
                        active[w] = 0;
                        bfs.push_back(w);
                    }
            std::sort(bfs.begin(), bfs.end());
            components.push_back(bfs);
        }

        make_separator(node_idx, cut.separator,
                       item.rank_base + size - static_cast<Vertex>(cut.separator.size()));
        nodes[node_idx].first_child = static_cast<std::uint32_t>(nodes.size());
        nodes[node_idx].num_children = static_cast<std::uint32_t>(components.size());
        Vertex child_base = item.rank_base;
        for (auto& component : components) {
            const Vertex child_size = static_cast<Vertex>(component.size());
            const std::uint32_t child_idx = static_cast<std::uint32_t>(nodes.size());
            nodes.push_back({node_idx, 0, 0, child_base, child_base + child_size - 1, child_base});
            queue.push_back({child_idx, std::move(component), child_base});
            child_base += child_size;
        }
    }

    result.order.order.resize(n);
    for (Vertex v = 0; v < n; ++v) result.order.order[result.order.rank[v]] = v;
    auto [pg, pc] = permute(g, c, result.order.rank);
    result.graph = std::move(pg);
    result.coordinates = std::move(pc);
    return result;
}

}  // namespace cch
