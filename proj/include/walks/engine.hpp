#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "walks/graph.hpp"
#include "walks/rng.hpp"

namespace walks {

/// One CONGEST message: a bounded tuple of integers standing in for one
/// O(log n)-bit message.  Convention: f[0] is a kind tag.
struct Message {
    std::array<std::int64_t, 5> f{};
};

struct RoundLog {
    std::int64_t total_rounds = 0;
    std::int64_t messages_delivered = 0;
    std::int64_t max_edge_queue = 0;
    std::map<std::string, std::int64_t> phase_breakdown;

    // Fold another log in under a phase label; rounds add sequentially.
    void absorb(const RoundLog& other, const std::string& phase) {
        total_rounds += other.total_rounds;
        messages_delivered += other.messages_delivered;
        max_edge_queue = std::max(max_edge_queue, other.max_edge_queue);
        phase_breakdown[phase] += other.total_rounds;
    }

    void add_rounds(std::int64_t rounds, const std::string& phase) {
        total_rounds += rounds;
        phase_breakdown[phase] += rounds;
    }
};

struct Delivery {
    int slot;  // receiver's slot index of the edge the message arrived on
    Message msg;
};

class Engine;

/// Per-node view handed to programs.  A program may read only its own id, its
/// incident edge list, its inbox and its derived PRNG streams.
class Context {
  public:
    NodeId id() const { return id_; }
    int slots() const { return static_cast<int>(graph_->adj(id_).size()); }
    NodeId neighbor(int slot) const { return graph_->adj(id_)[slot].neighbor; }
    std::uint32_t multiplicity(int slot) const { return graph_->adj(id_)[slot].multiplicity; }
    std::int64_t degree() const { return graph_->degree(id_); }

    /// Derived PRNG stream, cached per label.
    Rng& rng(std::string_view label);

    /// slot chosen with probability multiplicity/degree
    int random_neighbor_slot(Rng& r) const {
        return graph_->sample_neighbor_slot(id_, r.below(static_cast<std::uint64_t>(degree())));
    }

    /// Strict send: at most one per edge-direction per round, else
    /// BandwidthViolation.
    void send(int slot, const Message& m);

    /// Queued send: excess messages are serialized by the engine, one per
    /// edge-direction per round, FIFO.
    void send_queued(int slot, const Message& m);

  private:
    friend class Engine;
    Engine* engine_ = nullptr;
    const Graph* graph_ = nullptr;
    NodeId id_ = 0;
    std::map<std::string, Rng, std::less<>> rngs_;
};

class NodeProgram {
  public:
    virtual ~NodeProgram() = default;
    virtual void init(Context&) {}
    virtual void on_round(std::int64_t round, std::span<const Delivery> inbox, Context&) = 0;
    /// Engine will not quiesce before this round even with no traffic
    /// (for level-scheduled protocols).
    virtual std::int64_t pending_until() const { return 0; }
};

struct TranscriptRecord {
    std::int64_t round;
    NodeId from;
    NodeId to;
    Message msg;
};

struct EngineOptions {
    std::int64_t max_rounds = 10'000'000;
    bool bandwidth_per_multiplicity = false;
    bool record_transcript = false;
};

/// Synchronous round-driven executor.  Messages sent in round r arrive at the
/// start of round r+1; per round at most one message crosses each
/// edge-direction (or `multiplicity` of them with bandwidth_per_multiplicity).
/// Strictly single-threaded and deterministic for a fixed seed.
class Engine {
  public:
    Engine(const Graph& g, std::uint64_t seed, EngineOptions options = {});

    /// Runs programs (one per node) to quiescence.  total_rounds is the last
    /// round in which a message crossed an edge.
    RoundLog run(std::vector<std::unique_ptr<NodeProgram>>& programs);

    const std::vector<TranscriptRecord>& transcript() const { return transcript_; }
    std::uint64_t seed() const { return seed_; }

  private:
    friend class Context;
    void enqueue(NodeId from, int slot, const Message& m, bool strict);

    const Graph& graph_;
    std::uint64_t seed_;
    EngineOptions options_;

    // directed edge arena: dir id = offset_[u] + slot
    std::vector<int> offset_;
    std::vector<int> rev_slot_;   // receiver-side slot per dir id
    std::vector<NodeId> target_;  // receiver per dir id
    std::vector<std::deque<Message>> queue_;
    std::vector<std::int8_t> strict_sent_;  // per dir, current round
    std::vector<int> touched_dirs_;

    std::vector<TranscriptRecord> transcript_;
    std::int64_t current_round_ = 0;
};

}  // namespace walks
