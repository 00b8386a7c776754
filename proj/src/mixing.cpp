#include "walks/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "walks/errors.hpp"
#include "walks/protocols.hpp"
#include "walks/rng.hpp"

namespace walks {

double l1_distance(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw DimensionMismatch("distribution sizes differ");
    double d = 0;
    for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
    return d;
}

BucketPartition BucketPartition::build(const std::vector<double>& pi, double epsilon) {
    if (epsilon <= 0) throw UnsatisfiableParams("epsilon must be positive");
    BucketPartition bp;
    bp.epsilon = epsilon;
    double base = std::log1p(epsilon);
    std::map<long, std::vector<NodeId>> by_index;
    for (NodeId v = 0; v < static_cast<NodeId>(pi.size()); ++v) {
        if (pi[v] <= 0) throw UnsatisfiableParams("stationary probability must be positive");
        long idx = static_cast<long>(std::floor(std::log(1.0 / pi[v]) / base));
        by_index[idx].push_back(v);
    }
    for (auto& [idx, nodes] : by_index) {
        double mass = 0;
        for (NodeId v : nodes) mass += pi[v];
        bp.buckets.push_back(std::move(nodes));
        bp.bucket_mass.push_back(mass);
    }
    return bp;
}

namespace {

double default_epsilon() { return 1.0 / (12.0 * std::exp(1.0)); }

std::int64_t default_samples(int n) {
    return static_cast<std::int64_t>(std::ceil(10.0 * std::sqrt(static_cast<double>(n)) *
                                               std::log2(static_cast<double>(n))));
}

}  // namespace

bool closeness_test(const std::vector<NodeId>& samples, const std::vector<double>& pi,
                    double epsilon, const MixingConfig& cfg) {
    if (epsilon <= 0) epsilon = default_epsilon();
    int n = static_cast<int>(pi.size());
    double K = static_cast<double>(samples.size());
    double need = cfg.c_K * std::sqrt(static_cast<double>(n)) * (1.0 / epsilon) *
                  (1.0 / epsilon) * std::log2(static_cast<double>(std::max(n, 2)));
    if (K < need)
        throw InsufficientSamples("need at least " + std::to_string(need) + " samples, got " +
                                  std::to_string(samples.size()));

    BucketPartition bp = BucketPartition::build(pi, epsilon);
    std::size_t B = bp.buckets.size();

    std::vector<std::int64_t> node_count(n, 0);
    for (NodeId v : samples) {
        if (v < 0 || v >= n) throw InvalidNodeId("sample out of range");
        ++node_count[v];
    }

    // coarse histogram over buckets
    double coarse_l1 = 0;
    std::vector<std::int64_t> bucket_count(B, 0);
    for (std::size_t b = 0; b < B; ++b) {
        for (NodeId v : bp.buckets[b]) bucket_count[b] += node_count[v];
        coarse_l1 += std::abs(static_cast<double>(bucket_count[b]) / K - bp.bucket_mass[b]);
    }
    double theta = cfg.c_theta * std::sqrt(static_cast<double>(B) / K);
    if (coarse_l1 > theta) return false;

    for (std::size_t b = 0; b < B; ++b) {
        double m = bp.bucket_mass[b];
        double sigma = std::sqrt(K * m * (1.0 - m));
        if (std::abs(static_cast<double>(bucket_count[b]) - K * m) > 4.0 * sigma + 1e-12)
            return false;
    }

    // per-bucket pairwise-collision excess; under samples ~ pi the collision
    // count C_b has mean M*S2 and variance M*S2*(1-S2) + 6*binom(K,3)*(S3-S2^2)
    double M = K * (K - 1) / 2.0;
    double T3 = K * (K - 1) * (K - 2) / 6.0;
    for (std::size_t b = 0; b < B; ++b) {
        double s2 = 0, s3 = 0;
        for (NodeId v : bp.buckets[b]) {
            s2 += pi[v] * pi[v];
            s3 += pi[v] * pi[v] * pi[v];
        }
        double collisions = 0;
        for (NodeId v : bp.buckets[b])
            collisions += static_cast<double>(node_count[v]) * (node_count[v] - 1) / 2.0;
        double mean = M * s2;
        double var = M * s2 * (1.0 - s2) + 6.0 * T3 * (s3 - s2 * s2);
        var = std::max(var, 1e-12);
        if (collisions > mean + cfg.c_coll * std::sqrt(var)) return false;
    }
    return true;
}

MixingEstimate estimate_mixing_time(const Graph& g, NodeId x, const MixingConfig& cfg,
                                    std::uint64_t seed, RoundLog& log) {
    if (x < 0 || x >= g.node_count()) throw InvalidNodeId("bad source");
    if (g.is_bipartite())
        throw BipartiteGraph("mixing time is undefined on a bipartite graph");

    double eps = cfg.epsilon > 0 ? cfg.epsilon : default_epsilon();
    std::int64_t K = cfg.samples > 0 ? cfg.samples : default_samples(g.node_count());
    std::vector<double> pi = stationary_distribution(g);
    std::size_t B = BucketPartition::build(pi, eps).buckets.size();
    int D = diameter(g);

    MixingEstimate est;
    est.x = x;
    est.samples_per_length = K;
    est.epsilon_test = eps;

    std::uint64_t salt = 0;
    auto reliable_pass = [&](std::int64_t ell) {
        int passes = 0;
        for (int r = 0; r < cfg.reps; ++r) {
            std::vector<NodeId> sources(static_cast<std::size_t>(K), x);
            auto kr = many_random_walks(g, sources, ell,
                                        derive_rng(seed, salt++, "mix.walks").next_u64());
            log.absorb(kr.combined, "mix.walks");
            // each of the B bucket counts is recovered at x by one
            // broadcast+upcast over a BFS tree
            log.add_rounds(static_cast<std::int64_t>(B) * (2 * D + 2), "mix.bucket_counts");
            std::vector<NodeId> endpoints;
            endpoints.reserve(kr.walks.size());
            for (const auto& w : kr.walks) endpoints.push_back(w.endpoint);
            if (closeness_test(endpoints, pi, eps, cfg)) ++passes;
        }
        bool pass = 2 * passes > cfg.reps;
        est.transcript.push_back({ell, pass});
        return pass;
    };

    std::int64_t ell = 1;
    while (!reliable_pass(ell)) {
        if (ell > cfg.max_ell)
            throw RoundLimitExceeded("no PASS up to max_ell = " + std::to_string(cfg.max_ell));
        ell *= 2;
    }
    std::int64_t lo = ell / 2;  // last reliably-FAIL length (0 if ell == 1)
    std::int64_t hi = ell;
    while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (reliable_pass(mid))
            hi = mid;
        else
            lo = mid;
    }
    est.lower = lo;
    est.upper = hi;
    return est;
}

SpectralBounds spectral_bounds(const MixingEstimate& est, int n) {
    SpectralBounds sb;
    double low = est.upper > 0 ? 1.0 / static_cast<double>(est.upper) : 1.0;
    double high = est.lower > 0
                      ? std::log2(static_cast<double>(n)) / static_cast<double>(est.lower)
                      : 1.0;
    low = std::clamp(low, 0.0, 1.0);
    high = std::clamp(high, 0.0, 1.0);
    if (high < low) high = low;
    sb.gap = {low, high};
    sb.conductance = {low, std::sqrt(high)};
    return sb;
}

}  // namespace walks
