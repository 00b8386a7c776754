#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "walks/graph.hpp"
#include "walks/oracle.hpp"
#include "walks/protocols.hpp"

using namespace walks;
namespace o = walks::oracle;

namespace {

double tv_distance(const std::vector<std::int64_t>& counts, const std::vector<double>& probs) {
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    double tv = 0;
    for (size_t i = 0; i < probs.size(); ++i)
        tv += std::abs(static_cast<double>(counts[i]) / total - probs[i]);
    return tv / 2;
}

void check_positions_adjacent(const Graph& g, const Positions& pos, std::int64_t ell) {
    std::vector<NodeId> seq(ell + 1, -1);
    std::int64_t entries = 0;
    for (const auto& [v, offs] : pos)
        for (auto t : offs) {
            REQUIRE(t >= 0);
            REQUIRE(t <= ell);
            CHECK(seq[t] == -1);
            seq[t] = v;
            ++entries;
        }
    CHECK(entries == ell + 1);
    for (std::int64_t t = 0; t < ell; ++t)
        CHECK(g.multiplicity(seq[t], seq[t + 1]) >= 1);
}

}  // namespace

TEST_CASE("naive walk basics") {
    Graph c8 = generate_cycle(8);
    WalkResult z = naive_walk(c8, 3, 0, 1);
    CHECK(z.endpoint == 3);
    CHECK(z.round_log.total_rounds == 0);

    Graph k2 = generate_path(2);
    CHECK(naive_walk(k2, 0, 1, 5).endpoint == 1);

    WalkResult w = naive_walk(c8, 0, 17, 9);
    CHECK(w.round_log.total_rounds == 17);
    check_positions_adjacent(c8, w.positions, 17);

    CHECK_THROWS_AS(naive_walk(c8, 99, 1, 1), InvalidNodeId);
    CHECK_THROWS_AS(naive_walk(c8, 0, -1, 1), UnsatisfiableParams);
}

TEST_CASE("naive walk one-step law on the triangle") {
    Graph k3 = generate_clique(3);
    std::vector<std::int64_t> counts(3, 0);
    const int trials = 6000;
    for (int t = 0; t < trials; ++t) ++counts[naive_walk(k3, 0, 1, 100 + t).endpoint];
    CHECK(counts[0] == 0);
    auto rep = o::chi_square_gof({counts[1], counts[2]}, {0.5, 0.5});
    CHECK_FALSE(rep.reject);
}

TEST_CASE("phase 1 owns eta*deg(x) records with lengths in range") {
    Graph q3 = generate_hypercube(3);
    RoundLog log;
    auto store = phase1_generate(q3, 2, 4, 7, log);
    CHECK(store->record_count() == 2 * 3 * 8);
    std::vector<std::int64_t> per_owner(8, 0);
    for (int rid = 0; rid < store->record_count(); ++rid) {
        const ShortWalk& r = store->record(rid);
        ++per_owner[r.owner];
        CHECK(r.destination >= 0);
        CHECK(r.length >= 4);
        CHECK(r.length <= 7);
        CHECK_FALSE(r.used);
    }
    for (NodeId v = 0; v < 8; ++v) CHECK(per_owner[v] == 6);
    CHECK(log.total_rounds >= 4);  // at least one token of length >= lambda
}

TEST_CASE("phase 1 with lambda=1 gives unit lengths") {
    Graph c5 = generate_cycle(5);
    RoundLog log;
    auto store = phase1_generate(c5, 1, 1, 3, log);
    for (int rid = 0; rid < store->record_count(); ++rid)
        CHECK(store->record(rid).length == 1);
}

TEST_CASE("phase 1 lengths are uniform on [lambda, 2*lambda-1]") {
    Graph k8 = generate_clique(8);
    std::vector<std::int64_t> counts(4, 0);
    for (int rep = 0; rep < 20; ++rep) {
        RoundLog log;
        auto store = phase1_generate(k8, 10, 4, 50 + rep, log);
        for (int rid = 0; rid < store->record_count(); ++rid)
            ++counts[store->record(rid).length - 4];
    }
    auto repo = o::chi_square_gof(counts, {0.25, 0.25, 0.25, 0.25});
    CHECK_FALSE(repo.reject);
}

TEST_CASE("sample_destination draws uniformly and consumes records") {
    Graph c6 = generate_cycle(6);
    WalkStore store(6);
    // five records owned by node 0, finalized at assorted holders
    std::vector<NodeId> dests{0, 2, 3, 3, 5};
    for (NodeId d : dests) {
        int rid = store.add_record(0, 2);
        store.finalize(rid, d, 2);
    }
    CHECK(store.unused_count(0) == 5);

    std::vector<std::int64_t> hits(5, 0);
    const int draws = 3000;
    for (int t = 0; t < draws; ++t) {
        RoundLog log;
        SampleOutcome out = sample_destination(c6, store, 0, 1000 + t, t, log);
        REQUIRE(out.found);
        ++hits[out.record_id];
        store.record(out.record_id).used = false;  // reset for the next draw
    }
    auto rep = o::chi_square_gof(hits, std::vector<double>(5, 0.2));
    CHECK_FALSE(rep.reject);

    // without resets the store drains and then reports exhaustion
    RoundLog log;
    for (int i = 0; i < 5; ++i) {
        SampleOutcome out = sample_destination(c6, store, 0, i, 10000 + i, log);
        CHECK(out.found);
    }
    CHECK(store.unused_count(0) == 0);
    SampleOutcome empty = sample_destination(c6, store, 0, 0, 99999, log);
    CHECK_FALSE(empty.found);
}

TEST_CASE("sample_destination round budget is proportional to the BFS depth") {
    Graph p8 = generate_path(8);
    WalkStore store(8);
    int rid = store.add_record(0, 3);
    store.finalize(rid, 7, 3);
    RoundLog log;
    SampleOutcome out = sample_destination(p8, store, 0, 4, 0, log);
    REQUIRE(out.found);
    CHECK(out.destination == 7);
    CHECK(out.distance == 7);
    CHECK(log.total_rounds <= 3 * 7 + 3);
}

TEST_CASE("get_more_walks adds floor(ell/lambda) records with uniform stop lengths") {
    Graph c6 = generate_cycle(6);
    WalkStore store(6);
    RoundLog log;
    get_more_walks(c6, store, 2, 4, 4, 11, 0, log);
    CHECK(store.record_count() == 1);
    CHECK(log.total_rounds <= 2 * 4 + 2);

    std::vector<std::int64_t> counts(4, 0);
    WalkStore big(6);
    for (int inv = 1; inv <= 250; ++inv) {
        RoundLog l2;
        get_more_walks(c6, big, 2, 32, 4, 11, inv, l2);
    }
    CHECK(big.record_count() == 250 * 8);
    for (int rid = 0; rid < big.record_count(); ++rid) {
        const ShortWalk& r = big.record(rid);
        CHECK(r.owner == 2);
        REQUIRE(r.length >= 4);
        REQUIRE(r.length <= 7);
        ++counts[r.length - 4];
    }
    auto rep = o::chi_square_gof(counts, {0.25, 0.25, 0.25, 0.25});
    CHECK_FALSE(rep.reject);

    CHECK_THROWS_AS(get_more_walks(c6, store, 0, 2, 4, 1, 0, log), UnsatisfiableParams);
}

TEST_CASE("single walk endpoint law matches the matrix oracle") {
    Graph q3 = generate_hypercube(3);
    auto expected = o::walk_distribution(q3, 0, 6);
    std::vector<std::int64_t> counts(8, 0);
    const int trials = 6000;
    for (int t = 0; t < trials; ++t) {
        WalkResult r = single_random_walk(q3, 0, 6, {}, 2000 + t);
        ++counts[r.endpoint];
    }
    auto rep = o::chi_square_gof(counts, expected);
    CHECK_FALSE(rep.reject);
    CHECK(tv_distance(counts, expected) < 0.05);
}

TEST_CASE("connector offsets step by short-walk lengths") {
    Graph torus = generate_torus(4, 4);
    for (int t = 0; t < 40; ++t) {
        WalkResult r = single_random_walk(torus, 5, 64, {}, 300 + t);
        REQUIRE(r.connectors.size() >= 2);
        CHECK(r.connectors.front() == std::pair<NodeId, std::int64_t>{5, 0});
        CHECK(r.connectors.back().second == 64);
        CHECK(r.connectors.back().first == r.endpoint);
        for (size_t i = 0; i + 1 < r.connectors.size(); ++i) {
            std::int64_t gap = r.connectors[i + 1].second - r.connectors[i].second;
            CHECK(gap >= 1);
            if (i + 2 < r.connectors.size()) {
                CHECK(gap >= r.lambda);
                CHECK(gap <= 2 * r.lambda - 1);
            } else {
                CHECK(gap <= 2 * r.lambda);
            }
        }
    }
}

TEST_CASE("forced lambda above ell falls back to the naive walk") {
    Graph c6 = generate_cycle(6);
    WalkParams p;
    p.lambda = 50;
    WalkResult r = single_random_walk(c6, 1, 5, p, 77);
    CHECK(r.round_log.total_rounds == 5);
    check_positions_adjacent(c6, r.positions, 5);
}

TEST_CASE("very long walks switch to central collection") {
    Graph p3 = generate_path(3);  // m = 2, so ell > 4 triggers the upcast path
    auto expected = o::walk_distribution(p3, 0, 9);
    std::vector<std::int64_t> counts(3, 0);
    for (int t = 0; t < 4000; ++t) {
        WalkResult r = single_random_walk(p3, 0, 9, {}, 500 + t);
        ++counts[r.endpoint];
        if (t == 0) {
            check_positions_adjacent(p3, r.positions, 9);
            // rounds bounded by collection + answer, far below ell for long walks
            CHECK(r.round_log.phase_breakdown.count("central.upcast"));
        }
    }
    auto rep = o::chi_square_gof(counts, expected);
    CHECK_FALSE(rep.reject);
}

TEST_CASE("regeneration replays the stitched walk exactly") {
    Graph torus = generate_torus(4, 4);
    WalkResult r = single_random_walk(torus, 0, 48, {}, 4001);
    WalkResult a = regenerate_walk(torus, r, 1);
    WalkResult b = regenerate_walk(torus, r, 2);
    check_positions_adjacent(torus, a.positions, 48);
    CHECK(a.positions == b.positions);

    // connector offsets are contained in the regenerated positions
    for (const auto& [v, off] : r.connectors) {
        const auto& offs = a.positions.at(v);
        CHECK(std::find(offs.begin(), offs.end(), off) != offs.end());
    }

    WalkResult dropped = r;
    dropped.drop_trajectories();
    CHECK_THROWS_AS(regenerate_walk(torus, dropped, 1), StaleStore);
}

TEST_CASE("many walks: marginals match the oracle") {
    Graph k3 = generate_clique(3);
    auto expected = o::walk_distribution(k3, 0, 2);
    std::vector<std::vector<std::int64_t>> counts(3, std::vector<std::int64_t>(3, 0));
    const int trials = 5000;
    for (int t = 0; t < trials; ++t) {
        KWalksResult kr = many_random_walks(k3, {0, 0, 0}, 2, 6000 + t);
        REQUIRE(kr.walks.size() == 3);
        for (int i = 0; i < 3; ++i) ++counts[i][kr.walks[i].endpoint];
    }
    for (int i = 0; i < 3; ++i) {
        auto rep = o::chi_square_gof(counts[i], expected);
        CHECK_FALSE(rep.reject);
        CHECK(tv_distance(counts[i], expected) < 0.05);
    }
}

TEST_CASE("many walks: naive fallback round bound") {
    Graph c8 = generate_cycle(8);
    // k large relative to ell forces lambda > ell
    KWalksResult kr = many_random_walks(c8, {0, 1, 2, 3, 4, 5}, 3, 91);
    CHECK(kr.naive_fallback);
    CHECK(kr.combined.total_rounds <= 2 * (6 + 3));
    for (const auto& w : kr.walks) CHECK(w.ell == 3);
}

TEST_CASE("path verification") {
    Graph c6 = generate_cycle(6);
    VerifyResult yes = verify_path(c6, {0, 1, 2, 3, 4}, 1);
    CHECK(yes.verified);
    CHECK(yes.verdict_round >= 1);

    VerifyResult no = verify_path(c6, {0, 1, 2, 4, 5}, 1);
    CHECK_FALSE(no.verified);

    // revisits are allowed as long as every consecutive pair is an edge
    CHECK(verify_path(c6, {0, 1, 0, 5}, 1).verified);
    // single node sequence is trivially a path
    CHECK(verify_path(c6, {3}, 1).verified);
}

TEST_CASE("path verification on the lower-bound gadget") {
    GadgetInfo gi = generate_gadget_gn(32, 2);
    VerifyResult r = verify_path(gi.graph, gi.canonical_path, 5);
    CHECK(r.verified);
    CHECK(r.round_log.total_rounds >= 1);

    auto tampered = gi.canonical_path;
    std::swap(tampered[10], tampered[20]);
    CHECK_FALSE(verify_path(gi.graph, tampered, 5).verified);
}