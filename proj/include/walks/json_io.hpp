#pragma once

#include <string>

#include <json.hpp>

#include "walks/graph.hpp"
#include "walks/mixing.hpp"
#include "walks/protocols.hpp"
#include "walks/rst.hpp"

namespace walks {

using nlohmann::json;

json graph_to_json(const Graph& g);
Graph graph_from_json(const json& j);

json round_log_to_json(const RoundLog& log);

// phase1/phase2 split used by the CSV columns: phase1 is the precomputation,
// phase2 everything else in the run
std::int64_t phase1_rounds(const RoundLog& log);
std::int64_t phase2_rounds(const RoundLog& log);

json walk_result_to_json(const WalkResult& r, bool include_positions = false);
json spanning_tree_to_json(const SpanningTree& t);
json mixing_estimate_to_json(const MixingEstimate& e);

/// Parsed run configuration; unknown keys anywhere are rejected.
struct ExperimentConfig {
    std::string protocol;  // walk | kwalk | rst | mixing | verify-path | scaling
    json graph;            // generator spec or {"file": path}
    std::uint64_t seed = 1;
    int trials = 1;
    json params;  // protocol-specific
    std::string out_json;
    std::string out_csv;
};

ExperimentConfig parse_config(const json& j);
Graph build_graph_from_spec(const json& spec);

}  // namespace walks
