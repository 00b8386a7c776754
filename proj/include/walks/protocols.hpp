#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

#include "walks/engine.hpp"
#include "walks/graph.hpp"

namespace walks {

struct WalkParams {
    double c_lambda = 1.0;     // default lambda = ceil(c_lambda * sqrt(ell * D))
    int eta = 1;               // per-degree short-walk multiplicity
    std::int64_t lambda = 0;   // 0 = derive from c_lambda
};

/// One precomputed short walk.  The record lives with the destination node;
/// length is uniform on [lambda, 2*lambda-1].
struct ShortWalk {
    NodeId owner = -1;        // source of the short walk
    NodeId destination = -1;  // -1 while in flight
    int length = -1;
    bool used = false;
};

/// Simulator-side inventory of short walks plus the per-node relay tables
/// (walk id, step) -> outgoing slot recorded while the walks were generated.
/// The relay tables are what lets a walk be regenerated later by sending a
/// message back through each short walk.
class WalkStore {
  public:
    explicit WalkStore(int node_count)
        : held_(node_count), next_hop_(node_count) {}

    int add_record(NodeId owner, int length) {
        records_.push_back({owner, -1, length, false});
        return static_cast<int>(records_.size()) - 1;
    }

    ShortWalk& record(int rid) { return records_[rid]; }
    const ShortWalk& record(int rid) const { return records_[rid]; }
    int record_count() const { return static_cast<int>(records_.size()); }

    void finalize(int rid, NodeId destination, int length) {
        records_[rid].destination = destination;
        records_[rid].length = length;
        held_[destination].push_back(rid);
    }

    const std::vector<int>& held_at(NodeId v) const { return held_[v]; }

    static std::int64_t hop_key(int rid, int step) {
        return (static_cast<std::int64_t>(rid) << 24) | step;
    }
    void set_next_hop(NodeId at, int rid, int step, int slot) {
        next_hop_[at][hop_key(rid, step)] = slot;
    }
    int next_hop(NodeId at, int rid, int step) const {
        auto it = next_hop_[at].find(hop_key(rid, step));
        return it == next_hop_[at].end() ? -1 : it->second;
    }

    std::int64_t unused_count(NodeId owner) const {
        std::int64_t c = 0;
        for (const auto& r : records_)
            if (r.owner == owner && !r.used && r.destination >= 0) ++c;
        return c;
    }

  private:
    std::vector<ShortWalk> records_;
    std::vector<std::vector<int>> held_;  // record ids, by destination
    std::vector<std::unordered_map<std::int64_t, int>> next_hop_;
};

using Positions = std::map<NodeId, std::vector<std::int64_t>>;

struct WalkResult {
    NodeId source = -1;
    std::int64_t ell = 0;
    NodeId endpoint = -1;
    // stitch points (node, walk offset), starting with (source, 0) and ending
    // with (endpoint, ell)
    std::vector<std::pair<NodeId, std::int64_t>> connectors;
    Positions positions;  // empty unless naive / regenerated
    RoundLog round_log;
    int gmw_invocations = 0;
    std::int64_t lambda = 0;
    int eta = 1;

    // retained trajectories: short-walk segments as (record id, base offset)
    std::shared_ptr<WalkStore> store;
    std::vector<std::pair<int, std::int64_t>> segments;

    void drop_trajectories() {
        store.reset();
        segments.clear();
    }
};

struct SampleOutcome {
    bool found = false;
    int record_id = -1;
    NodeId destination = -1;
    int length = 0;
    int distance = 0;  // BFS distance from the caller to the destination
};

// ---- protocol operations ----

/// Token forwarded for ell steps, one round per step; positions fully
/// populated.
WalkResult naive_walk(const Graph& g, NodeId s, std::int64_t ell, std::uint64_t seed);

/// Phase 1: every node x starts eta*d(x) walks with independent lengths
/// uniform on [lambda, 2*lambda-1]; congestion serializes over the engine's
/// per-edge queues.
std::shared_ptr<WalkStore> phase1_generate(const Graph& g, int eta, std::int64_t lambda,
                                           std::uint64_t seed, RoundLog& log);

/// BFS sweep + weighted convergecast + deletion broadcast.  Samples uniformly
/// among v's unused short walks; marks the sampled record used.  Always
/// finishes within 3*depth+3 rounds (asserted).
SampleOutcome sample_destination(const Graph& g, WalkStore& store, NodeId v,
                                 std::uint64_t seed, int invocation, RoundLog& log);

/// floor(ell/lambda) fresh short walks from v; per-edge counts keep every
/// round congestion-free, so the run always finishes within 2*lambda+2 rounds
/// (asserted).
void get_more_walks(const Graph& g, WalkStore& store, NodeId v, std::int64_t ell,
                    std::int64_t lambda, std::uint64_t seed, int invocation, RoundLog& log);

/// Phase 1 + stitching via Sample-Destination with a naive tail; endpoint is
/// exactly an ell-step simple walk from s.
WalkResult single_random_walk(const Graph& g, NodeId s, std::int64_t ell,
                              const WalkParams& params, std::uint64_t seed);

struct KWalksResult {
    std::vector<WalkResult> walks;
    RoundLog combined;
    std::int64_t lambda = 0;
    bool naive_fallback = false;
};

/// k independent ell-walks; shared Phase 1, walks stitched one at a time, or
/// simultaneous naive tokens when the lambda formula exceeds ell.
KWalksResult many_random_walks(const Graph& g, const std::vector<NodeId>& sources,
                               std::int64_t ell, std::uint64_t seed, double c_lambda = 1.0);

/// Replays the stored short-walk trajectories so every visited node learns
/// all its offsets; returns a copy with positions populated.
WalkResult regenerate_walk(const Graph& g, const WalkResult& result, std::uint64_t seed);

struct VerifyResult {
    bool verified = false;
    std::int64_t verdict_round = 0;
    RoundLog round_log;
};

/// Distributed interval-merging verification that the 1-based sequence forms
/// a path in g.  Each node starts knowing only its own order numbers.
VerifyResult verify_path(const Graph& g, const std::vector<NodeId>& sequence,
                         std::uint64_t seed);

}  // namespace walks
