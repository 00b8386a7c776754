#include "walks/json_io.hpp"

#include <fstream>
#include <set>

#include "walks/errors.hpp"

namespace walks {

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw ConfigError("unknown key \"" + key + "\" in " + where);
}

}  // namespace

json graph_to_json(const Graph& g) {
    json edges = json::array();
    for (NodeId v = 0; v < g.node_count(); ++v)
        for (const auto& a : g.adj(v))
            if (a.neighbor >= v) edges.push_back({v, a.neighbor, a.multiplicity});
    return json{{"n", g.node_count()}, {"edges", edges}};
}

Graph graph_from_json(const json& j) {
    reject_unknown(j, {"n", "edges"}, "graph");
    int n = j.at("n").get<int>();
    std::vector<Graph::EdgeSpec> edges;
    bool self_loops = false;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3) throw ConfigError("edge entries must be [u,v,mult]");
        Graph::EdgeSpec es{e[0].get<NodeId>(), e[1].get<NodeId>(), e[2].get<std::uint32_t>()};
        if (es.u == es.v) self_loops = true;
        edges.push_back(es);
    }
    return Graph::build(n, edges, self_loops);
}

json round_log_to_json(const RoundLog& log) {
    return json{{"total_rounds", log.total_rounds},
                {"messages_delivered", log.messages_delivered},
                {"max_edge_queue", log.max_edge_queue},
                {"phase_breakdown", log.phase_breakdown}};
}

std::int64_t phase1_rounds(const RoundLog& log) {
    auto it = log.phase_breakdown.find("phase1");
    return it == log.phase_breakdown.end() ? 0 : it->second;
}

std::int64_t phase2_rounds(const RoundLog& log) { return log.total_rounds - phase1_rounds(log); }

json walk_result_to_json(const WalkResult& r, bool include_positions) {
    json j{{"source", r.source},
           {"ell", r.ell},
           {"endpoint", r.endpoint},
           {"lambda", r.lambda},
           {"eta", r.eta},
           {"gmw_invocations", r.gmw_invocations},
           {"connectors", r.connectors},
           {"round_log", round_log_to_json(r.round_log)}};
    if (include_positions) {
        json pos = json::object();
        for (const auto& [v, offs] : r.positions) pos[std::to_string(v)] = offs;
        j["positions"] = pos;
    }
    return j;
}

json spanning_tree_to_json(const SpanningTree& t) {
    json edges = json::array();
    for (const auto& [c, p] : t.tree_edges) edges.push_back({c, p});
    return json{{"root", t.root},
                {"tree_edges", edges},
                {"phase_count", t.phase_count},
                {"final_ell", t.final_ell}};
}

json mixing_estimate_to_json(const MixingEstimate& e) {
    json tr = json::array();
    for (const auto& [ell, pass] : e.transcript)
        tr.push_back({{"ell", ell}, {"verdict", pass ? "PASS" : "FAIL"}});
    return json{{"x", e.x},
                {"lower", e.lower},
                {"upper", e.upper},
                {"samples_per_length", e.samples_per_length},
                {"epsilon_test", e.epsilon_test},
                {"transcript", tr}};
}

Graph build_graph_from_spec(const json& spec) {
    if (spec.contains("file")) {
        reject_unknown(spec, {"file", "lazy"}, "graph spec");
        std::ifstream in(spec.at("file").get<std::string>());
        if (!in) throw ConfigError("cannot open graph file");
        json j;
        in >> j;
        Graph g = graph_from_json(j);
        return spec.value("lazy", false) ? g.make_lazy() : g;
    }
    std::string kind = spec.value("kind", "");
    auto finish = [&](Graph g) { return spec.value("lazy", false) ? g.make_lazy() : g; };
    if (kind == "path") {
        reject_unknown(spec, {"kind", "n", "lazy"}, "graph spec");
        return finish(generate_path(spec.at("n").get<int>()));
    }
    if (kind == "cycle") {
        reject_unknown(spec, {"kind", "n", "lazy"}, "graph spec");
        return finish(generate_cycle(spec.at("n").get<int>()));
    }
    if (kind == "clique") {
        reject_unknown(spec, {"kind", "n", "lazy"}, "graph spec");
        return finish(generate_clique(spec.at("n").get<int>()));
    }
    if (kind == "star") {
        reject_unknown(spec, {"kind", "leaves", "lazy"}, "graph spec");
        return finish(generate_star(spec.at("leaves").get<int>()));
    }
    if (kind == "hypercube") {
        reject_unknown(spec, {"kind", "dim", "lazy"}, "graph spec");
        return finish(generate_hypercube(spec.at("dim").get<int>()));
    }
    if (kind == "torus") {
        reject_unknown(spec, {"kind", "rows", "cols", "lazy"}, "graph spec");
        return finish(generate_torus(spec.at("rows").get<int>(), spec.at("cols").get<int>()));
    }
    if (kind == "erdos_renyi") {
        reject_unknown(spec, {"kind", "n", "p", "seed", "lazy"}, "graph spec");
        return finish(generate_erdos_renyi(spec.at("n").get<int>(), spec.at("p").get<double>(),
                                           spec.value("seed", std::uint64_t{1})));
    }
    if (kind == "random_regular") {
        reject_unknown(spec, {"kind", "n", "d", "seed", "lazy"}, "graph spec");
        return finish(generate_random_regular(spec.at("n").get<int>(), spec.at("d").get<int>(),
                                              spec.value("seed", std::uint64_t{1})));
    }
    if (kind == "gadget") {
        reject_unknown(spec, {"kind", "n", "k", "lazy"}, "graph spec");
        return finish(generate_gadget_gn(spec.at("n").get<int>(), spec.at("k").get<int>()).graph);
    }
    throw ConfigError("unknown graph kind \"" + kind + "\"");
}

ExperimentConfig parse_config(const json& j) {
    reject_unknown(j, {"protocol", "graph", "seed", "trials", "params", "out_json", "out_csv"},
                   "config");
    ExperimentConfig c;
    c.protocol = j.at("protocol").get<std::string>();
    static const std::set<std::string> protocols = {"walk", "kwalk",       "rst",
                                                    "mixing", "verify-path", "scaling"};
    if (!protocols.count(c.protocol)) throw ConfigError("unknown protocol \"" + c.protocol + "\"");
    c.graph = j.at("graph");
    c.seed = j.value("seed", std::uint64_t{1});
    c.trials = j.value("trials", 1);
    if (c.trials < 1) throw ConfigError("trials must be positive");
    c.params = j.value("params", json::object());
    static const std::set<std::string> param_keys = {
        "ell", "ells", "k", "sources", "eta", "c_lambda", "lambda", "K", "epsilon",
        "reps", "source", "root", "sequence", "max_ell", "positions"};
    reject_unknown(c.params, param_keys, "params");
    c.out_json = j.value("out_json", "");
    c.out_csv = j.value("out_csv", "");
    return c;
}

}  // namespace walks
