#pragma once

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "cch/cch.hpp"
#include "cch/dijkstra.hpp"
#include "cch/graph.hpp"
#include "cch/hypergeometric.hpp"
#include "cch/knn.hpp"
#include "cch/random.hpp"
#include "cch/separator_tree.hpp"
#include "cch/types.hpp"

namespace cch {

// Radiation model state. Opportunities are approximated by the population,
// so there is one shared per-vertex array; opportunity index i lives at the
// vertex v with prefix[v] <= i < prefix[v+1]. Vertex ids are ranks, which
// makes the opportunity count of any separator tree node a prefix
// difference.
struct DemandModel {
    std::vector<std::uint32_t> opportunities;  // = population, per permuted vertex
    std::vector<std::uint64_t> prefix;         // size |V|+1
    std::uint64_t total = 0;                   // M = N
    double lambda = 0.0;                       // selection damping in [0,1)
    // The classic formulations disagree on whether a traveler may pick an
    // opportunity at their own vertex; default is to allow it.
    bool include_origin_opportunities = true;
};

inline DemandModel build_demand_model(std::span<const std::uint32_t> population, double lambda,
                                      bool include_origin_opportunities = true) {
    if (lambda < 0.0 || lambda >= 1.0)
        throw InternalError("build_demand_model: lambda must be in [0, 1)");
    DemandModel model;
    model.opportunities.assign(population.begin(), population.end());
    model.prefix.resize(population.size() + 1);
    model.prefix[0] = 0;
    for (std::size_t v = 0; v < population.size(); ++v)
        model.prefix[v + 1] = model.prefix[v] + population[v];
    model.total = model.prefix.back();
    model.lambda = lambda;
    model.include_origin_opportunities = include_origin_opportunities;
    return model;
}

struct Trip {
    Vertex origin;
    Vertex destination;
    Weight distance;

    bool operator==(const Trip&) const = default;
};

// Pr[O = v] = m_v / M, via one uniform draw into the population prefix sums.
inline Vertex sample_origin(const DemandModel& model, Rng& rng) {
    if (model.total == 0) throw InternalError("sample_origin: zero total population");
    const std::uint64_t pick = uniform_index(rng, model.total);
    const auto it = std::upper_bound(model.prefix.begin(), model.prefix.end(), pick);
    return static_cast<Vertex>(it - model.prefix.begin()) - 1;
}

// O_fit uniform in 0..N, O_sel binomial with success probability 1 - lambda;
// both are redrawn until O_sel >= 1 so every trip has a destination.
// `excluded` shrinks the opportunity pool (origin exclusion).
inline std::uint64_t sample_num_selectable(const DemandModel& model, Rng& rng,
                                           std::uint64_t excluded = 0) {
    const std::uint64_t n = model.total - excluded;
    if (n == 0) throw InternalError("sample_num_selectable: no opportunities available");
    while (true) {
        const std::uint64_t fit = uniform_index(rng, n + 1);
        const std::uint64_t sel =
            std::binomial_distribution<std::uint64_t>(fit, 1.0 - model.lambda)(rng);
        if (sel >= 1) return sel;
    }
}

namespace detail {

inline std::uint32_t opportunities_at(const DemandModel& model, Vertex origin, Vertex v) {
    if (!model.include_origin_opportunities && v == origin) return 0;
    return model.opportunities[v];
}

inline std::uint64_t opportunities_in_range(const DemandModel& model, Vertex origin, Vertex l,
                                            Vertex r) {
    std::uint64_t count = model.prefix[r + 1] - model.prefix[l];
    if (!model.include_origin_opportunities && l <= origin && origin <= r)
        count -= model.opportunities[origin];
    return count;
}

// Draws `count` distinct opportunity positions from the range [l, r]
// (respecting origin exclusion) and maps them to vertices, ascending.
inline void sample_opportunity_vertices(const DemandModel& model, Vertex origin, Vertex l, Vertex r,
                                        std::uint64_t count, Rng& rng,
                                        std::vector<Vertex>& out_vertices) {
    out_vertices.clear();
    if (count == 0) return;
    const std::uint64_t size = opportunities_in_range(model, origin, l, r);
    assert(count <= size);
    const bool skip_origin =
        !model.include_origin_opportunities && l <= origin && origin <= r;
    // Floyd's subset sampling over the position space.
    std::vector<std::uint64_t> positions;
    positions.reserve(count);
    for (std::uint64_t j = size - count; j < size; ++j) {
        const std::uint64_t pick = uniform_index(rng, j + 1);
        const bool taken = std::find(positions.begin(), positions.end(), pick) != positions.end();
        positions.push_back(taken ? j : pick);
    }
    std::sort(positions.begin(), positions.end());
    for (std::uint64_t position : positions) {
        std::uint64_t global = model.prefix[l] + position;
        if (skip_origin && global >= model.prefix[origin]) global += model.opportunities[origin];
        const auto it = std::upper_bound(model.prefix.begin(), model.prefix.end(), global);
        out_vertices.push_back(static_cast<Vertex>(it - model.prefix.begin()) - 1);
    }
}

}  // namespace detail

// DRAD: the number O_int of opportunities closer than the nearest selectable
// one is approximated by a geometric variate (clamped to the feasible
// range); Dijkstra from the origin stops once O_int + 1 opportunities are
// visited, and the vertex settled last is the destination.
inline Trip drad_trip(DijkstraContext& ctx, const DemandModel& model, const Graph& g, Vertex origin,
                      std::uint64_t o_sel, Rng& rng) {
    const std::uint64_t n_eff =
        model.total - (model.include_origin_opportunities ? 0 : model.opportunities[origin]);
    if (o_sel < 1 || o_sel > n_eff) throw InternalError("drad_trip: infeasible O_sel");
    std::uint64_t interior = 0;
    const double p = static_cast<double>(o_sel) / (static_cast<double>(n_eff - o_sel) + 1.0);
    if (p < 1.0)
        interior = std::min(std::geometric_distribution<std::uint64_t>(p)(rng), n_eff - o_sel);
    const std::uint64_t wanted = interior + 1;
    std::uint64_t seen = 0;
    Vertex destination = INVALID_VERTEX;
    ctx.run(g, origin, [&](Vertex v, Weight) {
        seen += detail::opportunities_at(model, origin, v);
        if (seen >= wanted) {
            destination = v;
            return true;
        }
        return false;
    });
    if (destination == INVALID_VERTEX)
        throw InternalError("drad_trip: graph exhausted before enough opportunities were visited");
    return {origin, destination, ctx.dist(destination)};
}

struct CradOptions {
    DistMode mode = DistMode::LowerBound;
    std::uint32_t recursion_threshold = 8;
};

struct CradInstrumentation {
    struct PrunedChild {
        std::uint32_t node;
        Weight subgraph_dist;
        Weight best;
    };
    std::vector<PrunedChild> pruned;
};

namespace detail {

struct CradState {
    const DemandModel& model;
    const Cch& cch;
    const SepDecompTree& tree;
    SearchContext& ctx;
    Rng& rng;
    Vertex origin;
    CradOptions options;
    CradInstrumentation* instrumentation;
    Weight best_dist = INFINITE_WEIGHT;
    Vertex best_vertex = INVALID_VERTEX;
    std::vector<Vertex> sample_scratch;

    void examine_samples(Vertex l, Vertex r, std::uint64_t count) {
        sample_opportunity_vertices(model, origin, l, r, count, rng, sample_scratch);
        for (Vertex v : sample_scratch) {
            Weight dist;
            if (v == origin) {
                dist = 0;
            } else {
                const std::pair<Vertex, Weight> init[] = {{v, 0}};
                dist = ctx.reverse_elim_search(cch, init, v);
            }
            if (dist < best_dist) {
                best_dist = dist;
                best_vertex = v;
            }
        }
    }

    void search(std::uint32_t node_index, std::uint64_t o_sel) {
        const SepDecompNode& node = tree.nodes[node_index];
        const std::uint64_t in_subgraph =
            opportunities_in_range(model, origin, node.first_vertex, node.last_vertex);
        if (node.is_leaf() || in_subgraph <= options.recursion_threshold) {
            examine_samples(node.first_vertex, node.last_vertex, o_sel);
            return;
        }
        // Split the selectable opportunities over (children..., separator).
        std::vector<std::uint64_t> category_counts;
        category_counts.reserve(node.num_children + 1);
        for (std::uint32_t child = node.first_child;
             child < node.first_child + node.num_children; ++child)
            category_counts.push_back(opportunities_in_range(
                model, origin, tree.nodes[child].first_vertex, tree.nodes[child].last_vertex));
        category_counts.push_back(
            opportunities_in_range(model, origin, node.first_sep_vertex, node.last_vertex));
        const auto shares = mv_hypergeom(rng, o_sel, category_counts);

        examine_samples(node.first_sep_vertex, node.last_vertex, shares.back());

        std::vector<std::pair<Weight, std::uint32_t>> ordered;  // (dist, child offset)
        for (std::uint32_t i = 0; i < node.num_children; ++i) {
            if (shares[i] == 0) continue;
            const std::uint32_t child = node.first_child + i;
            const SepDecompNode& y = tree.nodes[child];
            const bool contains_origin = y.first_vertex <= origin && origin <= y.last_vertex;
            const Weight dist =
                contains_origin ? 0 : dist_to_subgraph(ctx, cch, tree, child, options.mode);
            ordered.emplace_back(dist, i);
        }
        std::sort(ordered.begin(), ordered.end());
        for (const auto& [dist, i] : ordered) {
            if (dist < best_dist)
                search(node.first_child + i, shares[i]);
            else if (instrumentation)
                instrumentation->pruned.push_back({node.first_child + i, dist, best_dist});
        }
    }
};

}  // namespace detail

// CRAD: finds the closest selectable opportunity by exploring the separator
// decomposition tree, splitting the selectable count with multivariate
// hypergeometric draws and pruning subtrees that cannot beat the closest
// sampled opportunity so far.
inline Trip crad_trip(SearchContext& ctx, const DemandModel& model, const Cch& cch,
                      const SepDecompTree& tree, Vertex origin, std::uint64_t o_sel, Rng& rng,
                      const CradOptions& options = {},
                      CradInstrumentation* instrumentation = nullptr) {
    const std::uint64_t n_eff =
        model.total - (model.include_origin_opportunities ? 0 : model.opportunities[origin]);
    if (o_sel < 1 || o_sel > n_eff) throw InternalError("crad_trip: infeasible O_sel");
    ctx.forward_elim_search(cch, origin);
    detail::CradState state{model, cch, tree, ctx, rng, origin, options, instrumentation};
    state.search(0, o_sel);
    ctx.reset_forward();
    if (state.best_vertex == INVALID_VERTEX)
        throw InternalError("crad_trip: no selectable opportunity was sampled");
    return {origin, state.best_vertex, state.best_dist};
}

enum class DemandAlgorithm { Crad, Drad };

struct AggregatedFlow {
    Vertex origin;
    Vertex destination;
    std::uint64_t count;

    bool operator==(const AggregatedFlow&) const = default;
};

inline std::vector<AggregatedFlow> aggregate_trips(std::span<const Trip> trips) {
    std::vector<std::pair<Vertex, Vertex>> pairs;
    pairs.reserve(trips.size());
    for (const Trip& trip : trips) pairs.emplace_back(trip.origin, trip.destination);
    std::sort(pairs.begin(), pairs.end());
    std::vector<AggregatedFlow> flows;
    for (std::size_t i = 0; i < pairs.size();) {
        std::size_t j = i;
        while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
        flows.push_back({pairs[i].first, pairs[i].second, j - i});
        i = j;
    }
    return flows;
}

// Generates trips one after another: origin, selectable count, then the
// algorithm-specific destination search.
inline std::vector<Trip> generate_demand(const DemandModel& model, const Cch& cch,
                                         const SepDecompTree& tree, DemandAlgorithm algorithm,
                                         std::uint64_t num_trips, Rng& rng,
                                         const CradOptions& options = {}) {
    std::vector<Trip> trips;
    trips.reserve(num_trips);
    SearchContext search(cch.up.num_vertices());
    DijkstraContext dijkstra(cch.graph.num_vertices());
    for (std::uint64_t i = 0; i < num_trips; ++i) {
        const Vertex origin = sample_origin(model, rng);
        const std::uint64_t excluded =
            model.include_origin_opportunities ? 0 : model.opportunities[origin];
        const std::uint64_t o_sel = sample_num_selectable(model, rng, excluded);
        trips.push_back(algorithm == DemandAlgorithm::Crad
                            ? crad_trip(search, model, cch, tree, origin, o_sel, rng, options)
                            : drad_trip(dijkstra, model, cch.graph, origin, o_sel, rng));
    }
    return trips;
}

// ---- Population files ------------------------------------------------------

// Canonical population CSV: `vertex_id,count`, 0-based post-permutation ids.
inline std::vector<std::uint32_t> read_population_csv(std::istream& in, Vertex num_vertices) {
    std::vector<std::uint32_t> population(num_vertices, 0);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::string_view view(line);
        if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
        if (view.empty()) continue;
        if (line_number == 1 && view.find_first_not_of("0123456789,") != std::string_view::npos)
            continue;  // header
        const std::size_t comma = view.find(',');
        if (comma == std::string_view::npos)
            throw ParseError("population file: missing comma at line " + std::to_string(line_number));
        std::uint64_t vertex = 0, count = 0;
        const auto r1 = std::from_chars(view.data(), view.data() + comma, vertex);
        const auto r2 =
            std::from_chars(view.data() + comma + 1, view.data() + view.size(), count);
        if (r1.ec != std::errc{} || r2.ec != std::errc{} ||
            r2.ptr != view.data() + view.size() || vertex >= num_vertices)
            throw ParseError("population file: malformed line " + std::to_string(line_number));
        population[vertex] += static_cast<std::uint32_t>(count);
    }
    return population;
}

inline void write_population_csv(std::ostream& out, std::span<const std::uint32_t> population) {
    out << "vertex_id,count\n";
    for (std::size_t v = 0; v < population.size(); ++v)
        if (population[v] != 0) out << v << ',' << population[v] << '\n';
}

// ---- Population grid ingestion ---------------------------------------------

struct GridCell {
    double latitude;   // south-west corner, degrees
    double longitude;  // south-west corner, degrees
    std::uint64_t count;
};

inline std::vector<GridCell> read_grid_csv(std::istream& in) {
    std::vector<GridCell> cells;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line == "\r") continue;
        if (line_number == 1 && line.find_first_not_of("0123456789.,-+eE \r") != std::string::npos)
            continue;  // header
        GridCell cell{};
        unsigned long long count = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%llu", &cell.latitude, &cell.longitude, &count) != 3)
            throw ParseError("grid file: malformed line " + std::to_string(line_number));
        cell.count = count;
        cells.push_back(cell);
    }
    return cells;
}

struct GridIngestResult {
    std::vector<std::uint32_t> population;
    std::uint64_t dropped = 0;  // inhabitants whose cell contains no vertex
};

// Assigns each inhabitant of each cell to a vertex chosen uniformly at
// random among the vertices lying in the cell; inhabitants of vertex-free
// cells are dropped. Cells are axis-aligned squares of cell_size_meters,
// anchored at their south-west corner.
inline GridIngestResult ingest_population_grid(const Coordinates& coordinates,
                                               std::span<const GridCell> cells,
                                               double cell_size_meters, Rng& rng) {
    constexpr double METERS_PER_LAT_DEGREE = 110574.0;
    constexpr double METERS_PER_LON_DEGREE_EQUATOR = 111320.0;
    constexpr double FIXED_POINT = 1e6;
    GridIngestResult result;
    result.population.assign(coordinates.size(), 0);
    std::vector<Vertex> members;
    for (const GridCell& cell : cells) {
        const double lat_extent = cell_size_meters / METERS_PER_LAT_DEGREE;
        const double lon_extent =
            cell_size_meters /
            (METERS_PER_LON_DEGREE_EQUATOR * std::cos(cell.latitude * std::numbers::pi / 180.0));
        const double lat_lo = cell.latitude * FIXED_POINT;
        const double lat_hi = (cell.latitude + lat_extent) * FIXED_POINT;
        const double lon_lo = cell.longitude * FIXED_POINT;
        const double lon_hi = (cell.longitude + lon_extent) * FIXED_POINT;
        members.clear();
        for (Vertex v = 0; v < coordinates.size(); ++v) {
            const double lat = coordinates.y[v];
            const double lon = coordinates.x[v];
            if (lat >= lat_lo && lat < lat_hi && lon >= lon_lo && lon < lon_hi)
                members.push_back(v);
        }
        if (members.empty()) {
            result.dropped += cell.count;
            continue;
        }
        for (std::uint64_t i = 0; i < cell.count; ++i)
            ++result.population[members[uniform_index(rng, members.size())]];
    }
    return result;
}

}  // namespace cch
