#include "walks/engine.hpp"

#include <algorithm>
#include <string>

#include "walks/errors.hpp"

namespace walks {

Rng& Context::rng(std::string_view label) {
    auto it = rngs_.find(label);
    if (it == rngs_.end())
        it = rngs_.emplace(std::string(label),
                           derive_rng(engine_->seed(), static_cast<std::uint64_t>(id_), label))
                 .first;
    return it->second;
}

void Context::send(int slot, const Message& m) { engine_->enqueue(id_, slot, m, true); }

void Context::send_queued(int slot, const Message& m) { engine_->enqueue(id_, slot, m, false); }

Engine::Engine(const Graph& g, std::uint64_t seed, EngineOptions options)
    : graph_(g), seed_(seed), options_(options) {
    int n = g.node_count();
    offset_.resize(n + 1);
    offset_[0] = 0;
    for (NodeId v = 0; v < n; ++v)
        offset_[v + 1] = offset_[v] + static_cast<int>(g.adj(v).size());
    int dirs = offset_[n];
    rev_slot_.resize(dirs);
    target_.resize(dirs);
    for (NodeId v = 0; v < n; ++v) {
        const auto& a = g.adj(v);
        for (int s = 0; s < static_cast<int>(a.size()); ++s) {
            int dir = offset_[v] + s;
            NodeId u = a[s].neighbor;
            target_[dir] = u;
            rev_slot_[dir] = g.slot_of(u, v);
        }
    }
    queue_.resize(dirs);
    strict_sent_.assign(dirs, 0);
}

void Engine::enqueue(NodeId from, int slot, const Message& m, bool strict) {
    int dir = offset_[from] + slot;
    if (strict) {
        if (strict_sent_[dir])
            throw BandwidthViolation("node " + std::to_string(from) +
                                     " emitted >1 message on one edge-direction in round " +
                                     std::to_string(current_round_));
        strict_sent_[dir] = 1;
    }
    if (queue_[dir].empty()) touched_dirs_.push_back(dir);
    queue_[dir].push_back(m);
}

RoundLog Engine::run(std::vector<std::unique_ptr<NodeProgram>>& programs) {
    int n = graph_.node_count();
    if (static_cast<int>(programs.size()) != n)
        throw ConfigError("program count must equal node count");

    std::vector<Context> ctx(n);
    for (NodeId v = 0; v < n; ++v) {
        ctx[v].engine_ = this;
        ctx[v].graph_ = &graph_;
        ctx[v].id_ = v;
    }

    RoundLog log;
    std::vector<std::vector<Delivery>> inbox(n), next_inbox(n);

    current_round_ = 0;
    for (NodeId v = 0; v < n; ++v) programs[v]->init(ctx[v]);

    std::int64_t last_active = 0;
    for (std::int64_t round = 1;; ++round) {
        if (round > options_.max_rounds)
            throw RoundLimitExceeded("engine exceeded max_rounds = " +
                                     std::to_string(options_.max_rounds));
        current_round_ = round;
        if (round > 1) {
            std::fill(strict_sent_.begin(), strict_sent_.end(), std::int8_t{0});
            for (NodeId v = 0; v < n; ++v) {
                programs[v]->on_round(round, inbox[v], ctx[v]);
                inbox[v].clear();
            }
        } else {
            // init() counts as the emission step of round 1
            for (NodeId v = 0; v < n; ++v)
                programs[v]->on_round(round, {}, ctx[v]);
        }

        // transmission: one message per touched edge-direction (or one per
        // multiplicity unit when configured), FIFO
        bool any = false;
        std::vector<int> still;
        still.reserve(touched_dirs_.size());
        for (int dir : touched_dirs_) {
            auto& q = queue_[dir];
            log.max_edge_queue = std::max(log.max_edge_queue,
                                          static_cast<std::int64_t>(q.size()));
            std::int64_t budget = 1;
            if (options_.bandwidth_per_multiplicity) {
                NodeId to = target_[dir];
                budget = graph_.adj(to)[rev_slot_[dir]].multiplicity;
            }
            while (budget-- > 0 && !q.empty()) {
                Message m = q.front();
                q.pop_front();
                NodeId to = target_[dir];
                next_inbox[to].push_back({rev_slot_[dir], m});
                ++log.messages_delivered;
                any = true;
                if (options_.record_transcript) {
                    NodeId from = to;  // resolve sender via reverse slot
                    from = graph_.adj(to)[rev_slot_[dir]].neighbor;
                    transcript_.push_back({round, from, to, m});
                }
            }
            if (!q.empty()) still.push_back(dir);
        }
        touched_dirs_ = std::move(still);
        if (any) last_active = round;

        std::swap(inbox, next_inbox);
        bool inflight = false;
        for (NodeId v = 0; v < n && !inflight; ++v) inflight = !inbox[v].empty();
        if (!inflight && touched_dirs_.empty()) {
            std::int64_t pending = 0;
            for (NodeId v = 0; v < n; ++v)
                pending = std::max(pending, programs[v]->pending_until());
            if (round >= pending) break;
        }
    }
    log.total_rounds = last_active;
    return log;
}

}  // namespace walks
