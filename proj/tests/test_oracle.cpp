#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "walks/graph.hpp"
#include "walks/oracle.hpp"
#include "walks/rng.hpp"

using namespace walks;
namespace o = walks::oracle;

TEST_CASE("walk distribution on the triangle") {
    Graph k3 = generate_clique(3);
    auto p = o::walk_distribution(k3, 0, 2);
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.25));
    CHECK(p[2] == doctest::Approx(0.25));

    auto p0 = o::walk_distribution(k3, 1, 0);
    CHECK(p0[1] == doctest::Approx(1.0));
}

TEST_CASE("walk distribution respects multiplicities") {
    Graph g = Graph::build(3, {{0, 1, 2}, {0, 2, 1}, {1, 2, 1}});
    auto p = o::walk_distribution(g, 0, 1);
    CHECK(p[1] == doctest::Approx(2.0 / 3));
    CHECK(p[2] == doctest::Approx(1.0 / 3));
}

TEST_CASE("exact mixing time") {
    Graph k3 = generate_clique(3);
    CHECK(o::exact_mixing_time(k3, 0, 1.0 / (2 * std::exp(1.0))) == 3);
    CHECK(o::exact_mixing_time(k3, 0, 2.1) == 0);
    CHECK_THROWS_AS(o::exact_mixing_time(generate_cycle(4), 0, 0.1), BipartiteGraph);
}

TEST_CASE("second eigenvalue closed forms") {
    for (int n : {3, 4, 7})
        CHECK(o::second_eigenvalue(generate_clique(n)) ==
              doctest::Approx(-1.0 / (n - 1)).epsilon(1e-9));
    CHECK(o::second_eigenvalue(generate_cycle(4)) == doctest::Approx(0.0).epsilon(1e-9));
    // cycle C_n: cos(2*pi/n)
    CHECK(o::second_eigenvalue(generate_cycle(6)) ==
          doctest::Approx(std::cos(2 * M_PI / 6)).epsilon(1e-9));
}

TEST_CASE("conductance examples") {
    CHECK(o::conductance(generate_path(2)) == doctest::Approx(1.0));
    Graph two_triangles =
        Graph::build(6, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {3, 4, 1}, {3, 5, 1}, {4, 5, 1}, {2, 3, 1}});
    CHECK(o::conductance(two_triangles) == doctest::Approx(1.0 / 7));
    CHECK(o::conductance(generate_cycle(4)) == doctest::Approx(0.5));
}

TEST_CASE("spanning tree counts") {
    CHECK(o::count_spanning_trees(generate_clique(4)) == "16");
    CHECK(o::count_spanning_trees(generate_cycle(5)) == "5");
    CHECK(o::count_spanning_trees(generate_path(4)) == "1");
    // Cayley: n^(n-2) for K_n, exercised at a size that overflows naive doubles slowly
    CHECK(o::count_spanning_trees(generate_clique(12)) == "61917364224");
}

TEST_CASE("spanning tree enumeration matches the count") {
    for (const Graph& g : {generate_clique(4), generate_cycle(5), generate_hypercube(3)}) {
        auto trees = o::enumerate_spanning_trees(g);
        CHECK(std::to_string(trees.size()) == o::count_spanning_trees(g));
        for (const auto& t : trees) CHECK(t.size() == static_cast<size_t>(g.node_count() - 1));
    }
}

TEST_CASE("chi-square goodness of fit") {
    // exact proportions: tiny statistic, no rejection
    std::vector<std::int64_t> even{2500, 2500, 2500, 2500};
    std::vector<double> uniform{0.25, 0.25, 0.25, 0.25};
    auto ok = o::chi_square_gof(even, uniform);
    CHECK_FALSE(ok.reject);
    CHECK(ok.p_value > 0.99);

    // a heavily skewed sample must be rejected
    std::vector<std::int64_t> skew{4000, 2000, 2000, 2000};
    auto bad = o::chi_square_gof(skew, uniform);
    CHECK(bad.reject);
    CHECK(bad.p_value < 1e-6);
}

TEST_CASE("chi-square p-values are roughly uniform under the null") {
    // self-calibration: multinomial draws from the stated law should be
    // rejected at the 5% level about 5% of the time
    Rng rng(123);
    std::vector<double> probs{0.1, 0.2, 0.3, 0.4};
    int rejections = 0;
    const int reps = 400, draws = 2000;
    for (int r = 0; r < reps; ++r) {
        std::vector<std::int64_t> obs(4, 0);
        for (int i = 0; i < draws; ++i) {
            double u = rng.real(), acc = 0;
            for (int b = 0; b < 4; ++b) {
                acc += probs[b];
                if (u < acc || b == 3) {
                    ++obs[b];
                    break;
                }
            }
        }
        if (o::chi_square_gof(obs, probs, 0.05).reject) ++rejections;
    }
    CHECK(rejections > 2);
    CHECK(rejections < 50);
}

TEST_CASE("regularized incomplete gamma sanity") {
    // Q(a, 0) = 1; chi-square survival with 2 dof is exp(-x/2)
    CHECK(o::gamma_q(1.5, 0.0) == doctest::Approx(1.0));
    CHECK(o::gamma_q(1.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
    CHECK(o::gamma_q(2.5, 30.0) < 1e-4);
}

TEST_CASE("visit count profile") {
    Graph c4 = generate_cycle(4);
    std::map<NodeId, std::vector<std::int64_t>> positions{
        {0, {0, 2}}, {1, {1}}, {3, {3}}};
    auto prof = o::visit_count_profile(positions, c4);
    CHECK(prof.counts.at(0) == 2);
    CHECK(prof.counts.at(1) == 1);
    CHECK(prof.max_per_degree == doctest::Approx(1.0));
}

TEST_CASE("oracle size ceilings are enforced") {
    CHECK_THROWS_AS(o::conductance(generate_clique(21)), TooLarge);
}
