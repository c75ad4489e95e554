#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "cch/cch.hpp"
#include "cch/dijkstra.hpp"
#include "cch/io.hpp"
#include "cch/separator_tree.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cch;

namespace {

Cch customized_cch(Graph g) {
    Cch cch = make_cch(std::move(g));
    customize(cch);
    return cch;
}

std::set<std::pair<Vertex, Vertex>> edge_set(const UpwardGraph& h) {
    std::set<std::pair<Vertex, Vertex>> edges;
    for (Vertex v = 0; v < h.num_vertices(); ++v)
        for (Vertex w : h.neighbors(v)) edges.emplace(v, w);
    return edges;
}

void check_closure(const UpwardGraph& h) {
    const auto edges = edge_set(h);
    for (Vertex v = 0; v < h.num_vertices(); ++v) {
        const auto row = h.neighbors(v);
        for (std::size_t i = 0; i < row.size(); ++i)
            for (std::size_t j = i + 1; j < row.size(); ++j)
                CHECK(edges.count({row[i], row[j]}) == 1);
    }
}

void check_against_reference_fill(const Graph& g) {
    const UpwardGraph h = contract(g);
    const auto reference = oracles::reference_elimination_fill(g);
    const auto edges = edge_set(h);
    std::size_t reference_count = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v)
        for (Vertex w = v + 1; w < g.num_vertices(); ++w)
            if (reference[v][w]) {
                ++reference_count;
                CHECK(edges.count({v, w}) == 1);
            }
    CHECK(edges.size() == reference_count);
}

}  // namespace

TEST_CASE("contracting a path in rank order adds no shortcuts") {
    const auto p5 = fixtures::p5();
    const UpwardGraph h = contract(p5.graph);
    CHECK(edge_set(h) ==
          std::set<std::pair<Vertex, Vertex>>{{0, 1}, {1, 2}, {2, 3}, {3, 4}});
}

TEST_CASE("contracting P5 under a separator order adds no shortcuts") {
    const auto p5 = fixtures::p5();
    const std::vector<Vertex> rank{0, 2, 4, 3, 1};
    const auto [pg, pc] = permute(p5.graph, p5.coordinates, rank);
    const UpwardGraph h = contract(pg);
    CHECK(h.num_edges() == 4);
    check_against_reference_fill(pg);
}

TEST_CASE("contraction closure holds on GRID3 under a nested dissection order") {
    const auto grid3 = fixtures::grid3();
    const auto d = build_sep_decomposition(grid3.graph, grid3.coordinates, 2, 0.3);
    const UpwardGraph h = contract(d.graph);
    check_closure(h);
    check_against_reference_fill(d.graph);
}

TEST_CASE("contraction matches the reference elimination game on random graphs") {
    Rng rng(404);
    for (int round = 0; round < 10; ++round) {
        const Vertex n = 5 + static_cast<Vertex>(uniform_index(rng, 40));
        const auto instance = fixtures::random_connected(n, 1.0, rng);
        check_against_reference_fill(instance.graph);
        check_closure(contract(instance.graph));
    }
}

TEST_CASE("customizing a path copies the unit metric") {
    const auto p5 = fixtures::p5();
    const Cch cch = customized_cch(p5.graph);
    REQUIRE(cch.up.num_edges() == 4);
    for (EdgeId e = 0; e < 4; ++e) {
        CHECK(cch.up.up_weight[e] == 1);
        CHECK(cch.up.down_weight[e] == 1);
    }
}

TEST_CASE("customization relaxes the lower triangle of a triangle graph") {
    Graph g(3, {{0, 1, 1}, {1, 0, 1}, {0, 2, 1}, {2, 0, 1}, {1, 2, 5}, {2, 1, 5}});
    const Cch cch = customized_cch(std::move(g));
    const EdgeId e12 = cch.up.first[1];  // edge (1,2)
    REQUIRE(cch.up.head[e12] == 2);
    CHECK(cch.up.orig_up[e12] == 5);
    CHECK(cch.up.up_weight[e12] == 2);
    CHECK(cch.up.down_weight[e12] == 2);
}

TEST_CASE("elimination tree parents on the path and the star") {
    const auto p5 = fixtures::p5();
    const Cch path_cch = make_cch(p5.graph);
    CHECK(path_cch.elim.parent == std::vector<Vertex>{1, 2, 3, 4, INVALID_VERTEX});
    CHECK(path_cch.elim.root == 4);

    Graph star(5, {{0, 4, 1}, {4, 0, 1}, {1, 4, 1}, {4, 1, 1},
                   {2, 4, 1}, {4, 2, 1}, {3, 4, 1}, {4, 3, 1}});
    const Cch star_cch = make_cch(std::move(star));
    for (Vertex leaf = 0; leaf < 4; ++leaf) CHECK(star_cch.elim.parent[leaf] == 4);
}

TEST_CASE("elimination tree ancestors equal the upward search space") {
    const auto grid3 = fixtures::grid3();
    const auto d = build_sep_decomposition(grid3.graph, grid3.coordinates, 2, 0.3);
    const Cch cch = make_cch(d.graph);
    const Vertex n = cch.up.num_vertices();
    for (Vertex v = 0; v < n; ++v) {
        std::set<Vertex> ancestors;
        for (Vertex a = v; a != INVALID_VERTEX; a = cch.elim.parent[a]) ancestors.insert(a);
        // upward reachability with infinite-weight pruning disabled
        std::set<Vertex> reachable{v};
        std::vector<Vertex> queue{v};
        for (std::size_t i = 0; i < queue.size(); ++i)
            for (Vertex w : cch.up.neighbors(queue[i]))
                if (reachable.insert(w).second) queue.push_back(w);
        CHECK(ancestors == reachable);
    }
}

TEST_CASE("forward labels along a path") {
    const auto p5 = fixtures::p5();
    const Cch cch = customized_cch(p5.graph);
    SearchContext ctx(5);
    const auto path = ctx.forward_elim_search(cch, 0);
    REQUIRE(std::vector<Vertex>(path.begin(), path.end()) == std::vector<Vertex>{0, 1, 2, 3, 4});
    for (Vertex v = 0; v < 5; ++v) CHECK(ctx.forward_label(v) == v);
    ctx.reset_forward();
    CHECK(ctx.all_labels_infinite());
}

TEST_CASE("forward search from the root touches only the root") {
    const auto p5 = fixtures::p5();
    const Cch cch = customized_cch(p5.graph);
    SearchContext ctx(5);
    const auto path = ctx.forward_elim_search(cch, 4);
    CHECK(path.size() == 1);
    CHECK(ctx.forward_label(4) == 0);
    ctx.reset_forward();
}

TEST_CASE("reverse search with multiple seeds returns the closest") {
    const auto p5 = fixtures::p5();
    const Cch cch = customized_cch(p5.graph);
    SearchContext ctx(5);
    ctx.forward_elim_search(cch, 0);
    const std::pair<Vertex, Weight> init[] = {{2, 0}, {3, 0}};
    CHECK(ctx.reverse_elim_search(cch, init, 2) == 2);
    ctx.reset_forward();
    CHECK(ctx.all_labels_infinite());
}

TEST_CASE("reverse search from the source itself returns zero") {
    const auto grid3 = fixtures::grid3();
    const auto d = build_sep_decomposition(grid3.graph, grid3.coordinates, 2, 0.3);
    Cch cch = make_cch(d.graph);
    customize(cch);
    SearchContext ctx(9);
    for (Vertex s = 0; s < 9; ++s) {
        ctx.forward_elim_search(cch, s);
        const std::pair<Vertex, Weight> init[] = {{s, 0}};
        CHECK(ctx.reverse_elim_search(cch, init, s) == 0);
        ctx.reset_forward();
    }
}

TEST_CASE("elimination tree queries are exact on GRID3") {
    const auto grid3 = fixtures::grid3();
    const auto d = build_sep_decomposition(grid3.graph, grid3.coordinates, 2, 0.3);
    Cch cch = make_cch(d.graph);
    customize(cch);
    SearchContext ctx(9);
    for (Vertex s = 0; s < 9; ++s) {
        const auto expected = oracles::bellman_ford(d.graph, s);
        for (Vertex t = 0; t < 9; ++t) CHECK(elim_tree_query(ctx, cch, s, t) == expected[t]);
    }
    CHECK(ctx.all_labels_infinite());
}

TEST_CASE("reset on an untouched context is a no-op") {
    SearchContext ctx(9);
    ctx.reset_forward();
    CHECK(ctx.all_labels_infinite());
}

TEST_CASE("contexts stay clean across random search/reset interleavings") {
    Rng rng(555);
    const auto instance = fixtures::random_connected(80, 1.0, rng);
    const auto scc = largest_scc(instance.graph, instance.coordinates);
    const auto d = build_sep_decomposition(scc.graph, scc.coordinates, 8, 0.3);
    Cch cch = make_cch(d.graph);
    customize(cch);
    const Vertex n = cch.up.num_vertices();
    SearchContext ctx(n);
    for (int i = 0; i < 100; ++i) {
        const Vertex s = static_cast<Vertex>(uniform_index(rng, n));
        ctx.forward_elim_search(cch, s);
        const Vertex t = static_cast<Vertex>(uniform_index(rng, n));
        const std::pair<Vertex, Weight> init[] = {{t, 0}};
        ctx.reverse_elim_search(cch, init, t);
        ctx.reset_forward();
        REQUIRE(ctx.all_labels_infinite());
    }
}

TEST_CASE("customized weights never undercut true distances") {
    Rng rng(777);
    const auto instance = fixtures::random_connected(60, 1.2, rng);
    const auto scc = largest_scc(instance.graph, instance.coordinates);
    const auto d = build_sep_decomposition(scc.graph, scc.coordinates, 8, 0.3);
    Cch cch = make_cch(d.graph);
    customize(cch);
    const Vertex n = cch.up.num_vertices();
    std::vector<std::vector<Weight>> dist(n);
    for (Vertex v = 0; v < n; ++v) dist[v] = oracles::bellman_ford(d.graph, v);
    for (Vertex v = 0; v < n; ++v)
        for (EdgeId e = cch.up.first[v]; e < cch.up.first[v + 1]; ++e) {
            const Vertex w = cch.up.head[e];
            CHECK(cch.up.up_weight[e] >= dist[v][w]);
            CHECK(cch.up.down_weight[e] >= dist[w][v]);
        }
}

TEST_CASE("bidirectional CCH Dijkstra matches the oracle") {
    const auto p5 = fixtures::p5();
    const Cch path_cch = customized_cch(p5.graph);
    CchDijkstraContext path_ctx(5);
    CHECK(cch_dijkstra_query(path_ctx, path_cch, 0, 4) == 4);
    CHECK(cch_dijkstra_query(path_ctx, path_cch, 3, 3) == 0);

    const auto grid3 = fixtures::grid3();
    const auto d = build_sep_decomposition(grid3.graph, grid3.coordinates, 2, 0.3);
    Cch cch = make_cch(d.graph);
    customize(cch);
    CchDijkstraContext ctx(9);
    for (Vertex s = 0; s < 9; ++s) {
        const auto expected = oracles::bellman_ford(d.graph, s);
        for (Vertex t = 0; t < 9; ++t) CHECK(cch_dijkstra_query(ctx, cch, s, t) == expected[t]);
    }
}

TEST_CASE("all three query algorithms agree on random graphs") {
    Rng rng(2025);
    for (int round = 0; round < 6; ++round) {
        const Vertex size = 30 + static_cast<Vertex>(uniform_index(rng, 120));
        const auto instance = fixtures::random_connected(size, 1.0, rng);
        const auto scc = largest_scc(instance.graph, instance.coordinates);
        const auto d = build_sep_decomposition(scc.graph, scc.coordinates, 8, 0.3);
        Cch cch = make_cch(d.graph);
        customize(cch);
        const Vertex n = cch.up.num_vertices();
        SearchContext elim_ctx(n);
        CchDijkstraContext dij_ctx(n);
        DijkstraContext oracle(n);
        for (int i = 0; i < 50; ++i) {
            const Vertex s = static_cast<Vertex>(uniform_index(rng, n));
            const Vertex t = static_cast<Vertex>(uniform_index(rng, n));
            oracle.run(d.graph, s);
            const Weight expected = oracle.dist(t);
            CHECK(elim_tree_query(elim_ctx, cch, s, t) == expected);
            CHECK(cch_dijkstra_query(dij_ctx, cch, s, t) == expected);
        }
    }
}

TEST_CASE("re-customization with a doubled metric doubles distances") {
    const auto grid3 = fixtures::grid3();
    const auto d = build_sep_decomposition(grid3.graph, grid3.coordinates, 2, 0.3);
    Cch cch = make_cch(d.graph);
    customize(cch);
    SearchContext ctx(9);
    const Weight before = elim_tree_query(ctx, cch, 0, 8);
    Graph doubled = d.graph;
    for (EdgeId e = 0; e < doubled.num_arcs(); ++e) doubled.set_length(e, 2 * doubled.length(e));
    cch.graph = doubled;
    customize(cch);
    CHECK(elim_tree_query(ctx, cch, 0, 8) == 2 * before);
}

TEST_CASE("CCH bundles round-trip through CCH1") {
    const auto grid3 = fixtures::grid3();
    const auto d = build_sep_decomposition(grid3.graph, grid3.coordinates, 2, 0.3);
    Cch cch = make_cch(d.graph);
    customize(cch);
    CchFile file{std::move(cch), d.order.rank, true};
    std::stringstream buffer;
    write_cch_file(buffer, file);
    const CchFile restored = read_cch_file(buffer);
    CHECK(restored.customized);
    CHECK(restored.rank_of_input == file.rank_of_input);
    CHECK(restored.cch.up == file.cch.up);
    CHECK(restored.cch.elim == file.cch.elim);
    CHECK(restored.cch.graph == file.cch.graph);
}

TEST_CASE("CCH1 reader rejects corrupt data") {
    std::stringstream buffer("CCHX garbage");
    CHECK_THROWS_AS(read_cch_file(buffer), ParseError);
}
