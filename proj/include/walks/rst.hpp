#pragma once

#include <cstdint>
#include <set>
#include <utility>

#include "walks/engine.hpp"
#include "walks/graph.hpp"
#include "walks/protocols.hpp"

namespace walks {

struct SpanningTree {
    NodeId root = 0;
    std::set<std::pair<NodeId, NodeId>> tree_edges;  // (child, parent)
    int phase_count = 0;
    std::int64_t final_ell = 0;
};

/// First-entry edge extraction: parent(v) = node at offset min(positions(v))-1.
/// The positions must describe one covering walk (every offset 0..ell held by
/// exactly one node).
SpanningTree first_visit_edges(const Graph& g, const Positions& positions);

/// Aldous-Broder over the simulator: one walk from the root, extended by
/// doubling total length (starting at n) until a convergecast over a BFS tree
/// confirms it covers the graph; the tree is read off the first visits.
SpanningTree random_spanning_tree(const Graph& g, NodeId root, std::uint64_t seed,
                                  RoundLog& log);

}  // namespace walks
