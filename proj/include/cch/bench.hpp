#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <queue>
#include <span>
#include <vector>

#include "cch/graph.hpp"
#include "cch/knn.hpp"
#include "cch/random.hpp"
#include "cch/types.hpp"

namespace cch {

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}

    void restart() { start_ = std::chrono::steady_clock::now(); }

    double elapsed_us() const {
        return std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start_)
            .count();
    }
    double elapsed_ms() const { return elapsed_us() / 1000.0; }

private:
    std::chrono::steady_clock::time_point start_;
};

// The |size| vertices nearest to center, in settling order. Frontier ties are
// broken by vertex id so the ball is reproducible.
inline std::vector<Vertex> grow_ball(const Graph& g, Vertex center, std::size_t size) {
    std::vector<Vertex> ball;
    ball.reserve(size);
    std::vector<bool> settled(g.num_vertices(), false);
    std::vector<Weight> dist(g.num_vertices(), INFINITE_WEIGHT);
    using Entry = std::uint64_t;  // (distance << 32) | vertex: orders ties by id
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist[center] = 0;
    queue.push(static_cast<Entry>(center));
    while (!queue.empty() && ball.size() < size) {
        const Entry top = queue.top();
        queue.pop();
        const Vertex v = static_cast<Vertex>(top & 0xffffffffu);
        const Weight d = static_cast<Weight>(top >> 32);
        if (settled[v] || d != dist[v]) continue;
        settled[v] = true;
        ball.push_back(v);
        for (EdgeId e = g.first_out(v); e < g.first_out(v + 1); ++e) {
            const Vertex w = g.head(e);
            const Weight candidate = add_weights(d, g.length(e));
            if (candidate < dist[w]) {
                dist[w] = candidate;
                queue.push(static_cast<Entry>(candidate) << 32 | w);
            }
        }
    }
    return ball;
}

// Uniform sample of `count` distinct elements of the pool, sorted ascending.
inline std::vector<Vertex> sample_vertices(Rng& rng, std::span<const Vertex> pool,
                                           std::size_t count) {
    std::vector<std::size_t> positions;
    positions.reserve(count);
    for (std::size_t j = pool.size() - count; j < pool.size(); ++j) {
        const std::size_t pick = static_cast<std::size_t>(uniform_index(rng, j + 1));
        const bool taken = std::find(positions.begin(), positions.end(), pick) != positions.end();
        positions.push_back(taken ? j : pick);
    }
    std::vector<Vertex> sample;
    sample.reserve(count);
    for (std::size_t position : positions) sample.push_back(pool[position]);
    std::sort(sample.begin(), sample.end());
    return sample;
}

// FNV-1a over the sorted distance multiset; algorithm-agnostic, since ties
// among equidistant targets may resolve differently.
inline std::uint64_t result_checksum(const KnnResult& result) {
    std::vector<Weight> distances;
    distances.reserve(result.size());
    for (const KnnEntry& entry : result) distances.push_back(entry.distance);
    std::sort(distances.begin(), distances.end());
    std::uint64_t hash = 1469598103934665603ull;
    for (Weight d : distances) {
        for (int byte = 0; byte < 4; ++byte) {
            hash ^= (d >> (8 * byte)) & 0xff;
            hash *= 1099511628211ull;
        }
    }
    return hash;
}

struct BenchmarkSpec {
    std::uint64_t ball_size;
    std::uint64_t poi_count;
    std::uint32_t k = 4;
    std::uint32_t num_poi_sets = 100;
    std::uint32_t num_sources_per_set = 100;
    std::uint64_t seed = 0;
};

struct TimingSummary {
    double mean = 0, min = 0, max = 0;
};

inline TimingSummary summarize(std::span<const double> samples) {
    TimingSummary s;
    if (samples.empty()) return s;
    s.min = s.max = samples[0];
    double total = 0;
    for (double x : samples) {
        total += x;
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.mean = total / static_cast<double>(samples.size());
    return s;
}

}  // namespace cch
