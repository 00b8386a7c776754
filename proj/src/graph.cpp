#include "walks/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

#include "walks/rng.hpp"

namespace walks {

Graph Graph::build(int n, const std::vector<EdgeSpec>& edges, bool allow_self_loops) {
    if (n <= 0) throw InvalidNodeId("node count must be positive");
    std::map<std::pair<NodeId, NodeId>, std::uint64_t> mult;
    for (const auto& e : edges) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw InvalidNodeId("edge endpoint out of range");
        if (e.multiplicity < 1) throw UnsatisfiableParams("multiplicity must be >= 1");
        if (e.u == e.v && !allow_self_loops) throw SelfLoop("self-loop not allowed");
        auto key = std::minmax(e.u, e.v);
        mult[{key.first, key.second}] += e.multiplicity;
    }

    Graph g;
    g.n_ = n;
    g.lazy_ = allow_self_loops;
    g.adj_.assign(n, {});
    g.degree_.assign(n, 0);
    for (const auto& [key, m] : mult) {
        if (m > 0xffffffffULL) throw UnsatisfiableParams("multiplicity overflow");
        auto [u, v] = key;
        auto mu = static_cast<std::uint32_t>(m);
        g.adj_[u].push_back({v, mu});
        if (u != v) g.adj_[v].push_back({u, mu});
        g.m_ += m;
        g.degree_[u] += m;
        if (u != v) g.degree_[v] += m;
    }
    for (auto& a : g.adj_)
        std::sort(a.begin(), a.end(),
                  [](const Adj& x, const Adj& y) { return x.neighbor < y.neighbor; });
    g.total_degree_ = std::accumulate(g.degree_.begin(), g.degree_.end(), std::int64_t{0});

    g.cum_.assign(n, {});
    for (NodeId v = 0; v < n; ++v) {
        std::int64_t acc = 0;
        g.cum_[v].reserve(g.adj_[v].size());
        for (const auto& a : g.adj_[v]) {
            acc += a.multiplicity;
            g.cum_[v].push_back(acc);
        }
    }

    // connectivity
    std::vector<char> seen(n, 0);
    std::deque<NodeId> q{0};
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        NodeId v = q.front();
        q.pop_front();
        for (const auto& a : g.adj_[v])
            if (!seen[a.neighbor]) {
                seen[a.neighbor] = 1;
                ++reached;
                q.push_back(a.neighbor);
            }
    }
    if (reached != n) throw DisconnectedGraph("graph is not connected");
    return g;
}

std::uint32_t Graph::multiplicity(NodeId u, NodeId v) const {
    int s = slot_of(u, v);
    return s < 0 ? 0 : adj_[u][s].multiplicity;
}

int Graph::slot_of(NodeId u, NodeId v) const {
    const auto& a = adj_[u];
    auto it = std::lower_bound(a.begin(), a.end(), v,
                               [](const Adj& x, NodeId id) { return x.neighbor < id; });
    if (it == a.end() || it->neighbor != v) return -1;
    return static_cast<int>(it - a.begin());
}

int Graph::sample_neighbor_slot(NodeId v, std::uint64_t r) const {
    const auto& c = cum_[v];
    auto it = std::upper_bound(c.begin(), c.end(), static_cast<std::int64_t>(r));
    return static_cast<int>(it - c.begin());
}

Graph Graph::make_lazy() const {
    std::vector<EdgeSpec> edges;
    for (NodeId v = 0; v < n_; ++v) {
        for (const auto& a : adj_[v])
            if (a.neighbor > v) edges.push_back({v, a.neighbor, a.multiplicity});
        if (degree_[v] > 0xffffffffLL) throw UnsatisfiableParams("degree too large for lazy loop");
        edges.push_back({v, v, static_cast<std::uint32_t>(degree_[v])});
    }
    return build(n_, edges, true);
}

bool Graph::is_bipartite() const {
    std::vector<int> color(n_, -1);
    std::deque<NodeId> q{0};
    color[0] = 0;
    while (!q.empty()) {
        NodeId v = q.front();
        q.pop_front();
        for (const auto& a : adj_[v]) {
            if (a.neighbor == v) return false;  // self-loop
            if (color[a.neighbor] < 0) {
                color[a.neighbor] = 1 - color[v];
                q.push_back(a.neighbor);
            } else if (color[a.neighbor] == color[v]) {
                return false;
            }
        }
    }
    return true;
}

BfsTree bfs_tree(const Graph& g, NodeId root) {
    if (root < 0 || root >= g.node_count()) throw InvalidNodeId("bfs root out of range");
    BfsTree t;
    t.root = root;
    t.parent.assign(g.node_count(), -1);
    t.level.assign(g.node_count(), -1);
    std::deque<NodeId> q{root};
    t.level[root] = 0;
    while (!q.empty()) {
        NodeId v = q.front();
        q.pop_front();
        for (const auto& a : g.adj(v)) {
            NodeId u = a.neighbor;
            if (u != v && t.level[u] < 0) {
                t.level[u] = t.level[v] + 1;
                t.parent[u] = v;
                t.depth = std::max(t.depth, t.level[u]);
                q.push_back(u);
            }
        }
    }
    return t;
}

int eccentricity(const Graph& g, NodeId v) { return bfs_tree(g, v).depth; }

int diameter(const Graph& g) {
    int d = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) d = std::max(d, eccentricity(g, v));
    return d;
}

std::vector<double> stationary_distribution(const Graph& g) {
    std::vector<double> pi(g.node_count());
    double total = static_cast<double>(g.total_degree());
    for (NodeId v = 0; v < g.node_count(); ++v)
        pi[v] = static_cast<double>(g.degree(v)) / total;
    return pi;
}

Graph generate_path(int n) {
    std::vector<Graph::EdgeSpec> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1});
    return Graph::build(n, e);
}

Graph generate_cycle(int n) {
    if (n < 3) throw UnsatisfiableParams("cycle needs n >= 3");
    std::vector<Graph::EdgeSpec> e;
    for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, 1});
    return Graph::build(n, e);
}

Graph generate_clique(int n) {
    if (n < 2) throw UnsatisfiableParams("clique needs n >= 2");
    std::vector<Graph::EdgeSpec> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.push_back({i, j, 1});
    return Graph::build(n, e);
}

Graph generate_star(int leaves) {
    if (leaves < 1) throw UnsatisfiableParams("star needs >= 1 leaf");
    std::vector<Graph::EdgeSpec> e;
    for (int i = 1; i <= leaves; ++i) e.push_back({0, i, 1});
    return Graph::build(leaves + 1, e);
}

Graph generate_hypercube(int dim) {
    if (dim < 1 || dim > 20) throw UnsatisfiableParams("hypercube dim out of range");
    int n = 1 << dim;
    std::vector<Graph::EdgeSpec> e;
    for (int v = 0; v < n; ++v)
        for (int b = 0; b < dim; ++b) {
            int u = v ^ (1 << b);
            if (u > v) e.push_back({v, u, 1});
        }
    return Graph::build(n, e);
}

Graph generate_torus(int rows, int cols) {
    if (rows < 3 || cols < 3) throw UnsatisfiableParams("torus needs both sides >= 3");
    auto id = [cols](int r, int c) { return r * cols + c; };
    std::vector<Graph::EdgeSpec> e;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            e.push_back({id(r, c), id((r + 1) % rows, c), 1});
            e.push_back({id(r, c), id(r, (c + 1) % cols), 1});
        }
    return Graph::build(rows * cols, e);
}

Graph generate_erdos_renyi(int n, double p, std::uint64_t seed) {
    if (n < 2 || p <= 0.0 || p > 1.0) throw UnsatisfiableParams("bad G(n,p) parameters");
    // conditioned on connectivity: redraw until connected
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Rng rng = derive_rng(seed, static_cast<std::uint64_t>(attempt), "gen.erdos_renyi");
        std::vector<Graph::EdgeSpec> e;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.bernoulli(p)) e.push_back({i, j, 1});
        try {
            return Graph::build(n, e);
        } catch (const DisconnectedGraph&) {
            continue;
        }
    }
    throw UnsatisfiableParams("G(n,p) connectivity conditioning did not converge");
}

Graph generate_random_regular(int n, int d, std::uint64_t seed) {
    if (d < 1 || d >= n) throw UnsatisfiableParams("regular degree out of range");
    if ((static_cast<std::int64_t>(n) * d) % 2 != 0)
        throw UnsatisfiableParams("n*d must be even for a d-regular graph");
    // pairing model; redraw on self-loops, parallel edges or disconnection
    for (int attempt = 0; attempt < 20000; ++attempt) {
        Rng rng = derive_rng(seed, static_cast<std::uint64_t>(attempt), "gen.regular");
        std::vector<int> stubs;
        stubs.reserve(static_cast<std::size_t>(n) * d);
        for (int v = 0; v < n; ++v)
            for (int i = 0; i < d; ++i) stubs.push_back(v);
        for (std::size_t i = stubs.size(); i > 1; --i)
            std::swap(stubs[i - 1], stubs[rng.below(i)]);
        std::vector<Graph::EdgeSpec> e;
        bool ok = true;
        std::map<std::pair<int, int>, int> used;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u == v) {
                ok = false;
                break;
            }
            auto key = std::minmax(u, v);
            if (used[{key.first, key.second}]++) {
                ok = false;
                break;
            }
            e.push_back({u, v, 1});
        }
        if (!ok) continue;
        try {
            return Graph::build(n, e);
        } catch (const DisconnectedGraph&) {
            continue;
        }
    }
    throw UnsatisfiableParams("regular graph sampling did not converge");
}

GadgetInfo generate_gadget_gn(int n, int k) {
    if (k < 1) throw InvalidK("gadget requires k >= 1");
    int k_prime = 1;
    while (k_prime <= 4 * k) k_prime <<= 1;  // smallest power of two with 4k < k'
    if (n < 1) throw InvalidK("gadget requires n >= 1");
    int n_prime = ((n + k_prime - 1) / k_prime) * k_prime;

    // ids: path nodes 0..n'-1 are v_1..v_n'; tree node with heap index
    // t in [1, 2k'-1] gets id n'-1+t.  Leaves are heap indices k'..2k'-1.
    int tree_nodes = 2 * k_prime - 1;
    int total = n_prime + tree_nodes;
    std::vector<Graph::EdgeSpec> e;
    for (int i = 0; i + 1 < n_prime; ++i) e.push_back({i, i + 1, 1});
    for (int t = 2; t <= tree_nodes; ++t)
        e.push_back({n_prime - 1 + t / 2, n_prime - 1 + t, 1});
    for (int i = 1; i <= k_prime; ++i) {
        NodeId leaf = n_prime - 1 + (k_prime - 1 + i);
        for (int j = 0; static_cast<std::int64_t>(j) * k_prime + i <= n_prime; ++j)
            e.push_back({leaf, j * k_prime + i - 1, 1});
    }

    GadgetInfo info{Graph::build(total, e), k_prime, n_prime, {}};
    info.canonical_path.resize(n_prime);
    for (int i = 0; i < n_prime; ++i) info.canonical_path[i] = i;
    return info;
}

}  // namespace walks
