#include "walks/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>

#include "walks/errors.hpp"

namespace walks::oracle {

using boost::multiprecision::cpp_int;

TransitionOperator::TransitionOperator(const Graph& g) : n_(g.node_count()), g_(g) {}

std::vector<double> TransitionOperator::apply(const std::vector<double>& p) const {
    if (static_cast<int>(p.size()) != n_) throw DimensionMismatch("distribution size mismatch");
    std::vector<double> out(n_, 0.0);
    for (NodeId u = 0; u < n_; ++u) {
        if (p[u] == 0.0) continue;
        double du = static_cast<double>(g_.degree(u));
        for (const auto& a : g_.adj(u)) out[a.neighbor] += p[u] * (a.multiplicity / du);
    }
    return out;
}

std::vector<double> walk_distribution(const Graph& g, NodeId s, std::int64_t ell) {
    if (g.node_count() > 4096) throw TooLarge("walk_distribution supports n <= 4096");
    if (s < 0 || s >= g.node_count()) throw InvalidNodeId("bad source");
    if (ell < 0) throw UnsatisfiableParams("ell must be >= 0");
    TransitionOperator P(g);
    std::vector<double> p(g.node_count(), 0.0);
    p[s] = 1.0;
    for (std::int64_t t = 0; t < ell; ++t) p = P.apply(p);
    return p;
}

double l1(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw DimensionMismatch("L1 over different node sets");
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
    return d;
}

int exact_mixing_time(const Graph& g, NodeId x, double eps) {
    if (g.node_count() > 4096) throw TooLarge("exact_mixing_time supports n <= 4096");
    if (g.is_bipartite()) throw BipartiteGraph("mixing time undefined on bipartite graphs");
    auto pi = stationary_distribution(g);
    TransitionOperator P(g);
    std::vector<double> p(g.node_count(), 0.0);
    p[x] = 1.0;
    // monotone in t, so the first hit is the answer
    for (int t = 0; t <= 100'000'000; ++t) {
        if (l1(p, pi) < eps) return t;
        p = P.apply(p);
    }
    throw RoundLimitExceeded("mixing time scan did not converge");
}

double second_eigenvalue(const Graph& g) {
    int n = g.node_count();
    if (n > 1024) throw TooLarge("second_eigenvalue supports n <= 1024");
    // S = D^{1/2} P D^{-1/2} is symmetric with the same spectrum as P
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    for (NodeId u = 0; u < n; ++u)
        for (const auto& a : g.adj(u))
            S(u, a.neighbor) =
                a.multiplicity /
                std::sqrt(static_cast<double>(g.degree(u)) * static_cast<double>(g.degree(a.neighbor)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    const auto& ev = es.eigenvalues();  // ascending
    return ev[n - 2];
}

double conductance(const Graph& g) {
    int n = g.node_count();
    if (n > 20) throw TooLarge("conductance supports n <= 20");
    double best = std::numeric_limits<double>::infinity();
    std::int64_t total_vol = g.total_degree();
    for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
        // node n-1 always outside S: enumerates each cut once
        std::int64_t vol = 0, cut = 0;
        for (NodeId u = 0; u < n - 1; ++u) {
            if (!(mask >> u & 1)) continue;
            vol += g.degree(u);
            for (const auto& a : g.adj(u)) {
                if (a.neighbor == u) continue;
                bool inside = a.neighbor < n - 1 && (mask >> a.neighbor & 1);
                if (!inside) cut += a.multiplicity;
            }
        }
        double phi = static_cast<double>(cut) /
                     static_cast<double>(std::min(vol, total_vol - vol));
        best = std::min(best, phi);
    }
    return best;
}

namespace {

// Bareiss fraction-free determinant over big integers.
cpp_int bareiss_det(std::vector<std::vector<cpp_int>> a) {
    int n = static_cast<int>(a.size());
    if (n == 0) return 1;
    cpp_int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int swap_row = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) {
                    swap_row = i;
                    break;
                }
            if (swap_row < 0) return 0;
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

}  // namespace

std::string count_spanning_trees(const Graph& g) {
    int n = g.node_count();
    if (n > 64) throw TooLarge("count_spanning_trees supports n <= 64");
    if (n == 1) return "1";
    // multiplicity-weighted Laplacian cofactor (drop last row/column);
    // self-loops do not contribute
    std::vector<std::vector<cpp_int>> L(n - 1, std::vector<cpp_int>(n - 1, 0));
    for (NodeId u = 0; u < n - 1; ++u) {
        for (const auto& a : g.adj(u)) {
            if (a.neighbor == u) continue;
            L[u][u] += a.multiplicity;
            if (a.neighbor < n - 1) L[u][a.neighbor] -= a.multiplicity;
        }
    }
    return bareiss_det(std::move(L)).str();
}

namespace {

struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[a] = b;
        return true;
    }
};

void enumerate_rec(const std::vector<std::pair<NodeId, NodeId>>& edges, std::size_t idx,
                   Dsu dsu, int components, EdgeSet& current, std::vector<EdgeSet>& out) {
    if (components == 1) {
        out.push_back(current);
        if (out.size() > 10000) throw TooMany("more than 10000 spanning trees");
        return;
    }
    if (idx >= edges.size()) return;
    if (static_cast<int>(edges.size() - idx) < components - 1) return;  // prune
    // include edges[idx]
    {
        Dsu d2 = dsu;
        if (d2.unite(edges[idx].first, edges[idx].second)) {
            current.insert(edges[idx]);
            enumerate_rec(edges, idx + 1, d2, components - 1, current, out);
            current.erase(edges[idx]);
        }
    }
    // exclude edges[idx]
    enumerate_rec(edges, idx + 1, dsu, components, current, out);
}

}  // namespace

std::vector<EdgeSet> enumerate_spanning_trees(const Graph& g) {
    int n = g.node_count();
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < n; ++u)
        for (const auto& a : g.adj(u))
            if (a.neighbor > u) edges.emplace_back(u, a.neighbor);
    std::vector<EdgeSet> out;
    EdgeSet current;
    enumerate_rec(edges, 0, Dsu(n), n, current, out);
    std::sort(out.begin(), out.end());
    return out;
}

// ---- incomplete gamma (series + continued fraction, Numerical Recipes style) ----

namespace {

double gamma_p_series(double a, double x) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 1000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 1000; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw UnsatisfiableParams("gamma_q domain");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

TestReport chi_square_gof(const std::vector<std::int64_t>& observed,
                          const std::vector<double>& expected_probs, double significance) {
    if (observed.size() != expected_probs.size())
        throw DimensionMismatch("observed/expected category mismatch");
    std::int64_t total = std::accumulate(observed.begin(), observed.end(), std::int64_t{0});
    for (std::size_t i = 0; i < observed.size(); ++i)
        if (expected_probs[i] <= 0.0 && observed[i] > 0)
            throw DegenerateExpected("nonzero count in a zero-probability category");

    // pool categories with small expected counts (ascending by expectation)
    std::vector<std::size_t> order(observed.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return expected_probs[a] < expected_probs[b];
    });
    std::vector<double> exp_counts;
    std::vector<std::int64_t> obs_counts;
    double acc_e = 0.0;
    std::int64_t acc_o = 0;
    for (std::size_t i : order) {
        acc_e += expected_probs[i] * static_cast<double>(total);
        acc_o += observed[i];
        if (acc_e >= 5.0) {
            exp_counts.push_back(acc_e);
            obs_counts.push_back(acc_o);
            acc_e = 0.0;
            acc_o = 0;
        }
    }
    if (acc_e > 0.0 || acc_o > 0) {
        if (exp_counts.empty()) {
            exp_counts.push_back(acc_e);
            obs_counts.push_back(acc_o);
        } else {
            exp_counts.back() += acc_e;
            obs_counts.back() += acc_o;
        }
    }

    TestReport r;
    r.dof = static_cast<int>(exp_counts.size()) - 1;
    for (std::size_t i = 0; i < exp_counts.size(); ++i) {
        double diff = static_cast<double>(obs_counts[i]) - exp_counts[i];
        if (exp_counts[i] > 0.0) r.statistic += diff * diff / exp_counts[i];
    }
    r.p_value = r.dof <= 0 ? 1.0 : gamma_q(r.dof / 2.0, r.statistic / 2.0);
    r.reject = r.p_value < significance;
    return r;
}

VisitProfile visit_count_profile(const std::map<NodeId, std::vector<std::int64_t>>& positions,
                                 const Graph& g) {
    VisitProfile p;
    for (const auto& [node, offs] : positions) {
        p.counts[node] = static_cast<std::int64_t>(offs.size());
        double ratio = static_cast<double>(offs.size()) / static_cast<double>(g.degree(node));
        p.max_per_degree = std::max(p.max_per_degree, ratio);
    }
    return p;
}

}  // namespace walks::oracle
