#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "walks/graph.hpp"

namespace walks::oracle {

/// Row-stochastic transition operator P(u->v) = multiplicity(u,v)/d(u),
/// applied to distributions by repeated vector-operator products.  Pure and
/// deterministic; sizes beyond the stated ceilings are rejected, never
/// approximated.
class TransitionOperator {
  public:
    explicit TransitionOperator(const Graph& g);

    int size() const { return n_; }
    std::vector<double> apply(const std::vector<double>& p) const;

  private:
    int n_;
    const Graph& g_;
};

// e_s P^ell; requires n <= 4096
std::vector<double> walk_distribution(const Graph& g, NodeId s, std::int64_t ell);

double l1(const std::vector<double>& p, const std::vector<double>& q);

// smallest t with ||pi_x(t) - pi||_1 < eps; rejects bipartite graphs
int exact_mixing_time(const Graph& g, NodeId x, double eps);

// second-largest eigenvalue of P (via the pi-weighted symmetrization);
// requires n <= 1024
double second_eigenvalue(const Graph& g);

// min over cuts of cut multiplicity / min volume; requires n <= 20
double conductance(const Graph& g);

// Kirchhoff / Matrix-Tree count in exact big-integer arithmetic; n <= 64.
// Returned as a decimal string (counts overflow 64 bits quickly).
std::string count_spanning_trees(const Graph& g);

using EdgeSet = std::set<std::pair<NodeId, NodeId>>;  // canonical (u<v) pairs

// all spanning trees as canonical edge sets; rejects counts > 10000
std::vector<EdgeSet> enumerate_spanning_trees(const Graph& g);

struct TestReport {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    bool reject = false;  // at the configured significance
};

// Pearson chi-square goodness of fit with small-expectation pooling.
TestReport chi_square_gof(const std::vector<std::int64_t>& observed,
                          const std::vector<double>& expected_probs,
                          double significance = 0.001);

// regularized upper incomplete gamma Q(a, x)
double gamma_q(double a, double x);

struct VisitProfile {
    std::map<NodeId, std::int64_t> counts;
    double max_per_degree = 0.0;  // max over y of count(y)/d(y)
};

VisitProfile visit_count_profile(const std::map<NodeId, std::vector<std::int64_t>>& positions,
                                 const Graph& g);

}  // namespace walks::oracle
