#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "walks/errors.hpp"

namespace walks {

using NodeId = int;

/// Immutable undirected multigraph.  Positive integer multiplicities stand in
/// for edge weights; the simple random walk leaves a node through an incident
/// edge endpoint chosen with probability multiplicity/degree.
///
/// Self-loops are rejected unless the graph is built as a "lazy" variant
/// (self-loop of multiplicity d(v) at every node, giving transition matrix
/// (I+P)/2).  Connectivity is enforced at construction.
class Graph {
  public:
    struct Adj {
        NodeId neighbor;
        std::uint32_t multiplicity;
    };

    struct EdgeSpec {
        NodeId u;
        NodeId v;
        std::uint32_t multiplicity;
    };

    static Graph build(int n, const std::vector<EdgeSpec>& edges, bool allow_self_loops = false);

    int node_count() const { return n_; }
    // sum of multiplicities over undirected edges (self-loops counted once)
    std::int64_t edge_count() const { return m_; }
    bool lazy() const { return lazy_; }

    // distinct-neighbor entries, sorted by neighbor id
    const std::vector<Adj>& adj(NodeId v) const { return adj_[v]; }
    // sum of incident multiplicities (self-loop counted once)
    std::int64_t degree(NodeId v) const { return degree_[v]; }
    std::int64_t total_degree() const { return total_degree_; }

    std::uint32_t multiplicity(NodeId u, NodeId v) const;

    // slot index of v in adj(u), or -1
    int slot_of(NodeId u, NodeId v) const;

    // slot chosen with probability multiplicity/degree; r must be uniform in
    // [0, degree(v))
    int sample_neighbor_slot(NodeId v, std::uint64_t r) const;

    /// Lazy variant: adds a self-loop of multiplicity degree(v) at each node.
    Graph make_lazy() const;

    bool is_bipartite() const;

  private:
    Graph() = default;

    int n_ = 0;
    std::int64_t m_ = 0;
    std::int64_t total_degree_ = 0;
    bool lazy_ = false;
    std::vector<std::vector<Adj>> adj_;
    std::vector<std::int64_t> degree_;
    std::vector<std::vector<std::int64_t>> cum_;  // per-node cumulative multiplicities
};

struct BfsTree {
    NodeId root = 0;
    std::vector<NodeId> parent;  // -1 for root
    std::vector<int> level;
    int depth = 0;
};

// Deterministic BFS; neighbor exploration in ascending node id.
BfsTree bfs_tree(const Graph& g, NodeId root);

// Exact hop diameter via all-pairs BFS.
int diameter(const Graph& g);

int eccentricity(const Graph& g, NodeId v);

// pi(i) = d(i) / sum_u d(u); equals d(i)/2m for loopless graphs.
std::vector<double> stationary_distribution(const Graph& g);

// ---- generators (deterministic given seed) ----

Graph generate_path(int n);
Graph generate_cycle(int n);
Graph generate_clique(int n);
Graph generate_star(int leaves);
Graph generate_hypercube(int dim);
Graph generate_torus(int rows, int cols);
Graph generate_erdos_renyi(int n, double p, std::uint64_t seed);
Graph generate_random_regular(int n, int d, std::uint64_t seed);

/// Lower-bound gadget: path v_1..v_n' overlaid with a complete binary tree of
/// k' leaves, leaf u_i attached to every path node v_{jk'+i}.  k' is the
/// smallest power of two with 4k < k'; n' the smallest multiple of k' with
/// n' >= n.
struct GadgetInfo {
    Graph graph;
    int k_prime = 0;
    int n_prime = 0;
    std::vector<NodeId> canonical_path;  // v_1..v_n' as node ids
};
GadgetInfo generate_gadget_gn(int n, int k);

}  // namespace walks
