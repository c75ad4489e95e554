#pragma once

#include <tuple>
#include <vector>

#include "cch/graph.hpp"
#include "cch/random.hpp"
#include "cch/types.hpp"

// Desk-scale fixtures shared across the test suites. P5 is the bidirected
// path 0-1-2-3-4 with unit lengths; GRID3 is the 3x3 bidirected unit grid,
// vertices row-major.

namespace fixtures {

using cch::Coordinates;
using cch::Graph;
using cch::Rng;
using cch::Vertex;
using cch::Weight;

struct Instance {
    Graph graph;
    Coordinates coordinates;
};

inline Instance path(Vertex n, Weight length = 1) {
    std::vector<std::tuple<Vertex, Vertex, Weight>> arcs;
    for (Vertex v = 0; v + 1 < n; ++v) {
        arcs.emplace_back(v, v + 1, length);
        arcs.emplace_back(v + 1, v, length);
    }
    Coordinates c;
    for (Vertex v = 0; v < n; ++v) {
        c.x.push_back(static_cast<std::int32_t>(v) * 1000);
        c.y.push_back(0);
    }
    return {Graph(n, std::move(arcs)), std::move(c)};
}

inline Instance p5() { return path(5); }

template <typename WeightFn>
inline Instance grid(Vertex width, Vertex height, WeightFn&& weight_of) {
    std::vector<std::tuple<Vertex, Vertex, Weight>> arcs;
    const auto id = [width](Vertex row, Vertex col) { return row * width + col; };
    for (Vertex row = 0; row < height; ++row)
        for (Vertex col = 0; col < width; ++col) {
            if (col + 1 < width) {
                const Weight w = weight_of(id(row, col), id(row, col + 1));
                arcs.emplace_back(id(row, col), id(row, col + 1), w);
                arcs.emplace_back(id(row, col + 1), id(row, col), w);
            }
            if (row + 1 < height) {
                const Weight w = weight_of(id(row, col), id(row + 1, col));
                arcs.emplace_back(id(row, col), id(row + 1, col), w);
                arcs.emplace_back(id(row + 1, col), id(row, col), w);
            }
        }
    Coordinates c;
    for (Vertex row = 0; row < height; ++row)
        for (Vertex col = 0; col < width; ++col) {
            c.x.push_back(static_cast<std::int32_t>(col) * 1000);
            c.y.push_back(static_cast<std::int32_t>(row) * 1000);
        }
    return {Graph(width * height, std::move(arcs)), std::move(c)};
}

inline Instance grid3() {
    return grid(3, 3, [](Vertex, Vertex) { return Weight{1}; });
}

// Strongly connected random graph: a random bidirected spanning tree plus
// extra bidirected edges (weights drawn per direction, so metrics are
// asymmetric) plus a few extra one-way arcs.
inline Instance random_connected(Vertex n, double extra_edge_factor, Rng& rng,
                                 Weight max_weight = 100) {
    std::vector<std::tuple<Vertex, Vertex, Weight>> arcs;
    const auto weight = [&]() {
        return static_cast<Weight>(cch::uniform_index(rng, max_weight) + 1);
    };
    for (Vertex v = 1; v < n; ++v) {
        const Vertex u = static_cast<Vertex>(cch::uniform_index(rng, v));
        arcs.emplace_back(u, v, weight());
        arcs.emplace_back(v, u, weight());
    }
    const std::size_t extra = static_cast<std::size_t>(extra_edge_factor * n);
    for (std::size_t i = 0; i < extra; ++i) {
        const Vertex u = static_cast<Vertex>(cch::uniform_index(rng, n));
        const Vertex v = static_cast<Vertex>(cch::uniform_index(rng, n));
        if (u == v) continue;
        arcs.emplace_back(u, v, weight());
        arcs.emplace_back(v, u, weight());
    }
    for (std::size_t i = 0; i < n / 10 + 1; ++i) {
        const Vertex u = static_cast<Vertex>(cch::uniform_index(rng, n));
        const Vertex v = static_cast<Vertex>(cch::uniform_index(rng, n));
        if (u != v) arcs.emplace_back(u, v, weight());
    }
    Coordinates c;
    for (Vertex v = 0; v < n; ++v) {
        c.x.push_back(static_cast<std::int32_t>(cch::uniform_index(rng, 1000000)));
        c.y.push_back(static_cast<std::int32_t>(cch::uniform_index(rng, 1000000)));
    }
    return {Graph(n, std::move(arcs)), std::move(c)};
}

}  // namespace fixtures
