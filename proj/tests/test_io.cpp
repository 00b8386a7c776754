#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "walks/json_io.hpp"
#include "walks/parallel.hpp"
#include "walks/protocols.hpp"

using namespace walks;

TEST_CASE("graph JSON round trip") {
    Graph g = Graph::build(4, {{0, 1, 2}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}});
    json j = graph_to_json(g);
    Graph h = graph_from_json(j);
    CHECK(h.node_count() == 4);
    CHECK(h.edge_count() == g.edge_count());
    for (NodeId u = 0; u < 4; ++u)
        for (NodeId v = 0; v < 4; ++v) CHECK(h.multiplicity(u, v) == g.multiplicity(u, v));

    // lazy graphs carry their self-loops through serialization
    json lj = graph_to_json(g.make_lazy());
    Graph lh = graph_from_json(lj);
    CHECK(lh.multiplicity(0, 0) == 3);
}

TEST_CASE("graph JSON rejects malformed input") {
    CHECK_THROWS_AS(graph_from_json(json{{"n", 2}, {"edges", {{0, 1, 1}}}, {"extra", 1}}),
                    ConfigError);
    CHECK_THROWS_AS(graph_from_json(json{{"n", 2}, {"edges", {{0, 1}}}}), ConfigError);
    CHECK_THROWS_AS(graph_from_json(json{{"n", 3}, {"edges", {{0, 1, 1}}}}), DisconnectedGraph);
}

TEST_CASE("graph specs build the advertised generators") {
    Graph q = build_graph_from_spec(json{{"kind", "hypercube"}, {"dim", 3}});
    CHECK(q.node_count() == 8);
    Graph lazy = build_graph_from_spec(json{{"kind", "clique"}, {"n", 4}, {"lazy", true}});
    CHECK(lazy.multiplicity(1, 1) == 3);
    CHECK_THROWS_AS(build_graph_from_spec(json{{"kind", "moebius"}, {"n", 4}}), ConfigError);
    CHECK_THROWS_AS(build_graph_from_spec(json{{"kind", "path"}, {"n", 4}, {"rows", 2}}),
                    ConfigError);
}

TEST_CASE("config parsing is strict about keys") {
    json good{{"protocol", "walk"},
              {"graph", {{"kind", "cycle"}, {"n", 8}}},
              {"seed", 3},
              {"trials", 5},
              {"params", {{"ell", 16}}}};
    ExperimentConfig c = parse_config(good);
    CHECK(c.protocol == "walk");
    CHECK(c.seed == 3);
    CHECK(c.trials == 5);
    CHECK(c.params.at("ell") == 16);

    json bad = good;
    bad["walk_length"] = 9;
    CHECK_THROWS_AS(parse_config(bad), ConfigError);

    json bad_param = good;
    bad_param["params"]["step_count"] = 9;
    CHECK_THROWS_AS(parse_config(bad_param), ConfigError);

    json bad_protocol = good;
    bad_protocol["protocol"] = "teleport";
    CHECK_THROWS_AS(parse_config(bad_protocol), ConfigError);

    json bad_trials = good;
    bad_trials["trials"] = 0;
    CHECK_THROWS_AS(parse_config(bad_trials), ConfigError);
}

TEST_CASE("walk result serialization") {
    Graph c6 = generate_cycle(6);
    WalkResult r = naive_walk(c6, 2, 7, 13);
    json j = walk_result_to_json(r, true);
    CHECK(j["source"] == 2);
    CHECK(j["ell"] == 7);
    CHECK(j["endpoint"] == r.endpoint);
    CHECK(j["round_log"]["total_rounds"] == 7);
    // positions carry ell+1 offsets in total
    std::int64_t entries = 0;
    for (const auto& [v, offs] : j["positions"].items()) entries += offs.size();
    CHECK(entries == 8);
}

TEST_CASE("phase split accounting") {
    RoundLog log;
    log.add_rounds(10, "phase1");
    log.add_rounds(4, "phase2.relay");
    log.add_rounds(3, "phase2.naive_tail");
    CHECK(phase1_rounds(log) == 10);
    CHECK(phase2_rounds(log) == 7);
    CHECK(phase1_rounds(log) + phase2_rounds(log) == log.total_rounds);
}

TEST_CASE("parallel trial runner matches the serial reference") {
    Graph g = generate_hypercube(4);
    const int trials = 24;
    auto campaign = [&](bool parallel) {
        std::vector<NodeId> endpoints(trials);
        std::vector<std::int64_t> rounds(trials);
        for_each_trial(trials, parallel, [&](int t) {
            WalkResult r = single_random_walk(g, 0, 64, {}, 7000 + t);
            endpoints[t] = r.endpoint;
            rounds[t] = r.round_log.total_rounds;
        });
        return std::make_pair(endpoints, rounds);
    };
    auto serial = campaign(false);
    auto parallel = campaign(true);
    CHECK(serial.first == parallel.first);
    CHECK(serial.second == parallel.second);
}
