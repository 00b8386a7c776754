#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "walks/engine.hpp"
#include "walks/graph.hpp"

namespace walks {

double l1_distance(const std::vector<double>& p, const std::vector<double>& q);

/// Nodes grouped by stationary probability into geometric buckets of ratio
/// (1+epsilon): bucket index floor(log_{1+eps} (1/pi_v)).
struct BucketPartition {
    double epsilon = 0;
    std::vector<std::vector<NodeId>> buckets;
    std::vector<double> bucket_mass;

    static BucketPartition build(const std::vector<double>& pi, double epsilon);
};

struct MixingConfig {
    double epsilon = 0;        // 0 = 1/(12e)
    std::int64_t samples = 0;  // K; 0 = ceil(10 * sqrt(n) * log2(n))
    int reps = 3;              // majority vote per candidate length
    std::int64_t max_ell = 1 << 20;

    // calibration constants (see tests/calibration notes)
    double c_K = 0.005;    // sample-size precondition: K >= c_K*sqrt(n)*(1/eps)^2*log2(n)
    double c_theta = 4.0;  // coarse-L1 threshold: theta = c_theta * sqrt(B/K)
    double c_coll = 4.0;   // per-bucket collision z-score bound
};

struct MixingEstimate {
    NodeId x = 0;
    std::int64_t lower = 0;  // largest reliably-FAIL length (0 if none)
    std::int64_t upper = 0;  // smallest reliably-PASS length
    std::int64_t samples_per_length = 0;
    double epsilon_test = 0;
    std::vector<std::pair<std::int64_t, bool>> transcript;  // (ell, pass)
};

/// Bucketed closeness test of the sample multiset against pi.  PASS iff the
/// bucket-coarsened L1 distance stays under theta, every bucket count is
/// within its binomial 4-sigma band, and no bucket shows a collision excess
/// beyond c_coll sigma (the collision statistic supplies power inside a
/// bucket, where the coarse histogram is blind).
bool closeness_test(const std::vector<NodeId>& samples, const std::vector<double>& pi,
                    double epsilon, const MixingConfig& cfg = {});

/// Doubling + binary search over walk lengths; at each candidate, K endpoint
/// samples come from many_random_walks and the verdict is a majority over
/// cfg.reps independent repetitions.
MixingEstimate estimate_mixing_time(const Graph& g, NodeId x, const MixingConfig& cfg,
                                    std::uint64_t seed, RoundLog& log);

struct SpectralBounds {
    std::pair<double, double> gap;          // [1/upper, log2(n)/lower], clamped to [0,1]
    std::pair<double, double> conductance;  // [gap_low, sqrt(gap_high)], constant-free
};

SpectralBounds spectral_bounds(const MixingEstimate& est, int n);

}  // namespace walks
