#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "walks/graph.hpp"

using namespace walks;

TEST_CASE("build validates edges and connectivity") {
    CHECK_THROWS_AS(Graph::build(3, {{0, 1, 1}}), DisconnectedGraph);
    CHECK_THROWS_AS(Graph::build(2, {{0, 0, 1}, {0, 1, 1}}), SelfLoop);
    CHECK_THROWS_AS(Graph::build(2, {{0, 2, 1}}), InvalidNodeId);
    CHECK_THROWS_AS(Graph::build(2, {{0, 1, 0}}), Error);

    Graph g = Graph::build(3, {{0, 1, 2}, {1, 2, 1}});
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 3);
    CHECK(g.degree(1) == 3);
    CHECK(g.multiplicity(0, 1) == 2);
    CHECK(g.multiplicity(1, 0) == 2);
    CHECK(g.multiplicity(0, 2) == 0);
}

TEST_CASE("adjacency slots are sorted and symmetric") {
    Graph g = generate_cycle(5);
    for (NodeId v = 0; v < 5; ++v) {
        const auto& a = g.adj(v);
        REQUIRE(a.size() == 2);
        CHECK(a[0].neighbor < a[1].neighbor);
        for (int s = 0; s < 2; ++s) {
            NodeId u = a[s].neighbor;
            int back = g.slot_of(u, v);
            REQUIRE(back >= 0);
            CHECK(g.adj(u)[back].neighbor == v);
        }
    }
    CHECK(g.slot_of(0, 3) == -1);
}

TEST_CASE("diameter examples") {
    CHECK(diameter(generate_path(5)) == 4);
    CHECK(diameter(generate_clique(5)) == 1);
    CHECK(diameter(generate_cycle(6)) == 3);
}

TEST_CASE("bfs tree is deterministic with min-id parents") {
    Graph g = generate_cycle(6);
    BfsTree t = bfs_tree(g, 0);
    CHECK(t.depth == 3);
    CHECK(t.parent[0] == -1);
    CHECK(t.level[3] == 3);
    // node 3 is reached from both 2 and 4; the smaller id wins
    CHECK(t.parent[3] == 2);
}

TEST_CASE("generators: sizes, degrees, diameters") {
    Graph q3 = generate_hypercube(3);
    CHECK(q3.node_count() == 8);
    for (NodeId v = 0; v < 8; ++v) CHECK(q3.degree(v) == 3);
    CHECK(diameter(q3) == 3);

    Graph torus = generate_torus(4, 4);
    CHECK(torus.node_count() == 16);
    for (NodeId v = 0; v < 16; ++v) CHECK(torus.degree(v) == 4);
    CHECK(diameter(torus) == 4);

    Graph star = generate_star(4);
    CHECK(star.node_count() == 5);
    CHECK(star.degree(0) == 4);

    CHECK(generate_clique(4).edge_count() == 6);
}

TEST_CASE("random generators are seed-deterministic") {
    Graph a = generate_erdos_renyi(24, 0.3, 11);
    Graph b = generate_erdos_renyi(24, 0.3, 11);
    Graph c = generate_erdos_renyi(24, 0.3, 12);
    CHECK(a.edge_count() == b.edge_count());
    bool same_as_c = a.edge_count() == c.edge_count();
    if (same_as_c) {
        for (NodeId v = 0; v < 24 && same_as_c; ++v)
            same_as_c = a.degree(v) == c.degree(v);
    }
    CHECK_FALSE(same_as_c);
    for (NodeId v = 0; v < 24; ++v) CHECK(a.degree(v) == b.degree(v));

    Graph r = generate_random_regular(16, 3, 5);
    for (NodeId v = 0; v < 16; ++v) CHECK(r.degree(v) == 3);
}

TEST_CASE("stationary distribution") {
    auto pi = stationary_distribution(generate_path(3));
    REQUIRE(pi.size() == 3);
    CHECK(pi[0] == doctest::Approx(0.25));
    CHECK(pi[1] == doctest::Approx(0.5));
    CHECK(pi[2] == doctest::Approx(0.25));

    auto ps = stationary_distribution(generate_star(3));
    CHECK(ps[0] == doctest::Approx(0.5));
    CHECK(ps[1] == doctest::Approx(1.0 / 6));
}

TEST_CASE("lazy variant adds matching self-loops") {
    Graph g = generate_cycle(4);
    CHECK(g.is_bipartite());
    Graph lg = g.make_lazy();
    CHECK(lg.lazy());
    CHECK_FALSE(lg.is_bipartite());
    for (NodeId v = 0; v < 4; ++v) {
        CHECK(lg.degree(v) == 4);
        CHECK(lg.multiplicity(v, v) == 2);
    }
}

TEST_CASE("gadget graph invariants") {
    GadgetInfo gi = generate_gadget_gn(32, 2);
    CHECK(gi.k_prime == 16);
    CHECK(gi.n_prime == 32);
    CHECK(gi.graph.node_count() == 32 + 2 * 16 - 1);
    CHECK(static_cast<int>(gi.canonical_path.size()) == gi.n_prime);
    int bound = 2 * static_cast<int>(std::log2(gi.k_prime)) + 2;
    CHECK(diameter(gi.graph) <= bound);

    // every path node has exactly one tree-leaf neighbor
    std::set<NodeId> path_nodes(gi.canonical_path.begin(), gi.canonical_path.end());
    for (NodeId v : gi.canonical_path) {
        int leaf_neighbors = 0;
        for (const auto& a : gi.graph.adj(v))
            if (!path_nodes.count(a.neighbor)) ++leaf_neighbors;
        CHECK(leaf_neighbors == 1);
    }
    // consecutive path nodes are adjacent
    for (size_t i = 0; i + 1 < gi.canonical_path.size(); ++i)
        CHECK(gi.graph.multiplicity(gi.canonical_path[i], gi.canonical_path[i + 1]) >= 1);
}
