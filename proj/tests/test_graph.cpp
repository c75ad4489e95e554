#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "cch/dijkstra.hpp"
#include "cch/dimacs.hpp"
#include "cch/graph.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cch;

TEST_CASE("gr parser handles the minimal graph") {
    std::istringstream in("p sp 2 1\na 1 2 5\n");
    const Graph g = parse_dimacs_gr(in);
    REQUIRE(g.num_vertices() == 2);
    REQUIRE(g.num_arcs() == 1);
    CHECK(g.arc_length(0, 1) == 5);
    CHECK(g.arc_length(1, 0) == INFINITE_WEIGHT);
}

TEST_CASE("parallel arcs collapse to the minimum length") {
    std::istringstream in("p sp 2 2\na 1 2 5\na 1 2 3\n");
    const Graph g = parse_dimacs_gr(in);
    REQUIRE(g.num_arcs() == 1);
    CHECK(g.arc_length(0, 1) == 3);
}

TEST_CASE("gr parser reports malformed input with line numbers") {
    const auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_dimacs_gr(in);
    };
    CHECK_THROWS_AS(parse("p xx 2 1\na 1 2 5\n"), ParseError);
    CHECK_THROWS_AS(parse("p sp 2 2\na 1 2 5\n"), ParseError);       // arc count mismatch
    CHECK_THROWS_AS(parse("p sp 2 1\na 1 3 5\n"), ParseError);       // id out of range
    CHECK_THROWS_AS(parse("p sp 2 1\na 1 2 -4\n"), ParseError);      // negative weight
    CHECK_THROWS_AS(parse("a 1 2 5\n"), ParseError);                 // arc before header
    CHECK_THROWS_MATCHES(parse("p sp 2 1\nq 1 2\n"), ParseError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("line 2")));
}

TEST_CASE("gr writer round-trips P5") {
    const auto p5 = fixtures::p5();
    std::ostringstream out;
    write_dimacs_gr(out, p5.graph);
    std::istringstream in(out.str());
    CHECK(parse_dimacs_gr(in) == p5.graph);
}

TEST_CASE("co parser reads coordinates") {
    std::istringstream in("p aux sp co 1\nv 1 100 200\n");
    const Coordinates c = parse_dimacs_co(in);
    REQUIRE(c.size() == 1);
    CHECK(c.x[0] == 100);
    CHECK(c.y[0] == 200);
}

TEST_CASE("co parser rejects missing vertices") {
    std::istringstream in("p aux sp co 3\nv 1 0 0\nv 3 5 5\n");
    CHECK_THROWS_MATCHES(parse_dimacs_co(in), ParseError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("missing coordinates")));
}

TEST_CASE("co writer round-trips GRID3 coordinates") {
    const auto grid3 = fixtures::grid3();
    std::ostringstream out;
    write_dimacs_co(out, grid3.coordinates);
    std::istringstream in(out.str());
    CHECK(parse_dimacs_co(in) == grid3.coordinates);
}

TEST_CASE("largest_scc keeps strongly connected graphs intact") {
    const auto p5 = fixtures::p5();
    const auto result = largest_scc(p5.graph, p5.coordinates);
    CHECK(result.graph == p5.graph);
    CHECK(result.coordinates == p5.coordinates);
    for (Vertex v = 0; v < 5; ++v) CHECK(result.to_old[v] == v);
}

TEST_CASE("largest_scc drops an isolated vertex") {
    const auto p5 = fixtures::p5();
    std::vector<std::tuple<Vertex, Vertex, Weight>> arcs;
    for (Vertex v = 0; v < 5; ++v)
        for (Vertex w : p5.graph.out_heads(v)) arcs.emplace_back(v, w, p5.graph.arc_length(v, w));
    Coordinates c = p5.coordinates;
    c.x.push_back(99);
    c.y.push_back(99);
    const Graph with_isolated(6, std::move(arcs));
    const auto result = largest_scc(with_isolated, c);
    CHECK(result.graph == p5.graph);
    CHECK(result.to_old == std::vector<Vertex>{0, 1, 2, 3, 4});
}

TEST_CASE("largest_scc drops a one-way appendix") {
    const auto p5 = fixtures::p5();
    std::vector<std::tuple<Vertex, Vertex, Weight>> arcs;
    for (Vertex v = 0; v < 5; ++v)
        for (Vertex w : p5.graph.out_heads(v)) arcs.emplace_back(v, w, p5.graph.arc_length(v, w));
    arcs.emplace_back(4, 5, 1);  // no way back
    Coordinates c = p5.coordinates;
    c.x.push_back(99);
    c.y.push_back(99);
    const auto result = largest_scc(Graph(6, std::move(arcs)), c);
    CHECK(result.graph == p5.graph);
    CHECK(result.to_old == std::vector<Vertex>{0, 1, 2, 3, 4});
}

TEST_CASE("largest_scc matches a Kosaraju-style oracle on random digraphs") {
    Rng rng(20240811);
    for (int round = 0; round < 20; ++round) {
        const Vertex n = 2 + static_cast<Vertex>(uniform_index(rng, 30));
        std::vector<std::tuple<Vertex, Vertex, Weight>> arcs;
        const std::size_t num_arcs = uniform_index(rng, 4 * n + 1);
        for (std::size_t i = 0; i < num_arcs; ++i) {
            const Vertex u = static_cast<Vertex>(uniform_index(rng, n));
            const Vertex v = static_cast<Vertex>(uniform_index(rng, n));
            if (u != v) arcs.emplace_back(u, v, 1);
        }
        Coordinates c;
        c.x.assign(n, 0);
        c.y.assign(n, 0);
        const Graph g(n, std::move(arcs));
        const auto result = largest_scc(g, c);
        const auto expected_members = oracles::largest_scc_members(g);
        REQUIRE(result.to_old.size() == expected_members.size());
        CHECK(result.to_old == expected_members);
        CHECK(oracles::strongly_connected(result.graph));
    }
}

TEST_CASE("largest_scc rejects the empty graph") {
    CHECK_THROWS_AS(largest_scc(Graph(), Coordinates{}), InternalError);
}

TEST_CASE("dijkstra on P5 and GRID3") {
    const auto p5 = fixtures::p5();
    CHECK(dijkstra(p5.graph, 0) == std::vector<Weight>{0, 1, 2, 3, 4});
    const auto grid3 = fixtures::grid3();
    CHECK(dijkstra(grid3.graph, 0)[8] == 4);
}

TEST_CASE("dijkstra matches Bellman-Ford on random graphs") {
    Rng rng(7);
    for (int round = 0; round < 10; ++round) {
        const auto instance = fixtures::random_connected(50, 1.5, rng);
        DijkstraContext ctx(50);
        for (Vertex s = 0; s < 50; s += 7) {
            ctx.run(instance.graph, s);
            const auto expected = oracles::bellman_ford(instance.graph, s);
            for (Vertex v = 0; v < 50; ++v) CHECK(ctx.dist(v) == expected[v]);
        }
    }
}

TEST_CASE("dijkstra stop predicate leaves settled vertices exact") {
    const auto grid3 = fixtures::grid3();
    DijkstraContext ctx(9);
    std::size_t settled = 0;
    ctx.run(grid3.graph, 0, [&](Vertex, Weight) { return ++settled == 4; });
    const auto expected = oracles::bellman_ford(grid3.graph, 0);
    REQUIRE(ctx.settled().size() == 4);
    for (Vertex v : ctx.settled()) CHECK(ctx.dist(v) == expected[v]);
}

TEST_CASE("permute by the identity and by reversal") {
    const auto p5 = fixtures::p5();
    const std::vector<Vertex> identity{0, 1, 2, 3, 4};
    const auto [same_g, same_c] = permute(p5.graph, p5.coordinates, identity);
    CHECK(same_g == p5.graph);
    CHECK(same_c == p5.coordinates);

    const std::vector<Vertex> reversal{4, 3, 2, 1, 0};
    const auto [rev_g, rev_c] = permute(p5.graph, p5.coordinates, reversal);
    CHECK(rev_g.arc_length(4, 3) == 1);  // old edge 0-1
    CHECK(rev_g.arc_length(0, 1) == 1);  // old edge 4-3
    CHECK(rev_c.x[4] == p5.coordinates.x[0]);
}

TEST_CASE("permute rejects non-permutations") {
    const auto p5 = fixtures::p5();
    const std::vector<Vertex> bad{0, 1, 2, 3, 3};
    CHECK_THROWS_AS(permute(p5.graph, p5.coordinates, bad), InternalError);
}

TEST_CASE("distances are permutation-invariant") {
    Rng rng(99);
    const auto instance = fixtures::random_connected(60, 1.0, rng);
    std::vector<Vertex> order(60);
    for (Vertex v = 0; v < 60; ++v) order[v] = v;
    std::shuffle(order.begin(), order.end(), rng);
    const auto [pg, pc] = permute(instance.graph, instance.coordinates, order);
    DijkstraContext before(60), after(60);
    for (int i = 0; i < 100; ++i) {
        const Vertex s = static_cast<Vertex>(uniform_index(rng, 60));
        const Vertex t = static_cast<Vertex>(uniform_index(rng, 60));
        before.run(instance.graph, s);
        after.run(pg, order[s]);
        CHECK(before.dist(t) == after.dist(order[t]));
    }
}
