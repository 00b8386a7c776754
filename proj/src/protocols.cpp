#include "walks/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "walks/errors.hpp"
#include "walks/rng.hpp"

namespace walks {

namespace {

enum MsgKind : std::int64_t {
    K_P1 = 1,   // phase-1 short-walk token: {kind, rid, steps_done, target_len}
    K_BFS,      // {kind, sender_level}
    K_SD2,      // convergecast candidate: {kind, rid, count, length}
    K_DEL,      // deletion broadcast
    K_GMW,      // per-edge walk count: {kind, count}
    K_TOK,      // plain walk token: {kind, rid, steps_done, base_offset}
    K_RGN,      // regeneration token: {kind, rid, step, base_offset, final}
    K_UP,       // topology upcast: {kind, u, v, multiplicity}
    K_ANN,      // path order-number announcement: {kind, position}
    K_INT,      // merged interval gossip: {kind, lo, hi}
};

void check_node(const Graph& g, NodeId v) {
    if (v < 0 || v >= g.node_count())
        throw InvalidNodeId("node id " + std::to_string(v) + " out of range");
}

// ---- phase 1 ----

struct Phase1Shared {
    WalkStore* store;
    int eta;
    std::int64_t lambda;
};

class Phase1Program : public NodeProgram {
  public:
    explicit Phase1Program(Phase1Shared* sh) : sh_(sh) {}

    void init(Context& ctx) override {
        auto& rng = ctx.rng("p1");
        std::int64_t count = static_cast<std::int64_t>(sh_->eta) * ctx.degree();
        for (std::int64_t i = 0; i < count; ++i) {
            std::int64_t target = sh_->lambda + static_cast<std::int64_t>(
                                                    rng.below(static_cast<std::uint64_t>(sh_->lambda)));
            int rid = sh_->store->add_record(ctx.id(), static_cast<int>(target));
            int slot = ctx.random_neighbor_slot(rng);
            sh_->store->set_next_hop(ctx.id(), rid, 0, slot);
            ctx.send_queued(slot, {{K_P1, rid, 1, target, 0}});
        }
    }

    void on_round(std::int64_t round, std::span<const Delivery> inbox, Context& ctx) override {
        if (round == 1) return;
        auto& rng = ctx.rng("p1");
        for (const auto& d : inbox) {
            int rid = static_cast<int>(d.msg.f[1]);
            std::int64_t steps = d.msg.f[2];
            std::int64_t target = d.msg.f[3];
            if (steps == target) {
                sh_->store->finalize(rid, ctx.id(), static_cast<int>(target));
            } else {
                int slot = ctx.random_neighbor_slot(rng);
                sh_->store->set_next_hop(ctx.id(), rid, static_cast<int>(steps), slot);
                ctx.send_queued(slot, {{K_P1, rid, steps + 1, target, 0}});
            }
        }
    }

  private:
    Phase1Shared* sh_;
};

// ---- BFS sweep (also reused for the topology-upcast preamble) ----

struct BfsShared {
    NodeId root;
    std::vector<int> level;
    std::vector<int> parent_slot;
    int depth = 0;
};

class BfsProgram : public NodeProgram {
  public:
    explicit BfsProgram(BfsShared* sh) : sh_(sh) {}

    void init(Context& ctx) override {
        if (ctx.id() == sh_->root) {
            sh_->level[ctx.id()] = 0;
            for (int s = 0; s < ctx.slots(); ++s) ctx.send(s, {{K_BFS, 0, 0, 0, 0}});
        }
    }

    void on_round(std::int64_t, std::span<const Delivery> inbox, Context& ctx) override {
        if (inbox.empty() || sh_->level[ctx.id()] >= 0) return;
        int best_slot = -1;
        for (const auto& d : inbox)
            if (best_slot < 0 || ctx.neighbor(d.slot) < ctx.neighbor(best_slot))
                best_slot = d.slot;
        int lvl = static_cast<int>(inbox.front().msg.f[1]) + 1;
        sh_->level[ctx.id()] = lvl;
        sh_->parent_slot[ctx.id()] = best_slot;
        sh_->depth = std::max(sh_->depth, lvl);
        for (int s = 0; s < ctx.slots(); ++s) ctx.send(s, {{K_BFS, lvl, 0, 0, 0}});
    }

  private:
    BfsShared* sh_;
};

BfsShared run_bfs(const Graph& g, NodeId root, std::uint64_t seed, RoundLog& log,
                  const std::string& phase) {
    BfsShared sh;
    sh.root = root;
    sh.level.assign(g.node_count(), -1);
    sh.parent_slot.assign(g.node_count(), -1);
    std::vector<std::unique_ptr<NodeProgram>> progs;
    for (int v = 0; v < g.node_count(); ++v) progs.push_back(std::make_unique<BfsProgram>(&sh));
    Engine eng(g, seed);
    log.absorb(eng.run(progs), phase);
    return sh;
}

// ---- weighted convergecast (sweep 2 of Sample-Destination) ----

struct Sweep2Shared {
    WalkStore* store;
    NodeId v;
    const BfsShared* tree;
    std::string label;
    // result at the root
    bool found = false;
    int rid = -1;
};

class Sweep2Program : public NodeProgram {
  public:
    explicit Sweep2Program(Sweep2Shared* sh) : sh_(sh) {}

    std::int64_t pending_until() const override { return sched_; }

    void init(Context& ctx) override {
        int lvl = sh_->tree->level[ctx.id()];
        sched_ = sh_->tree->depth - lvl + 1;
        std::vector<int> own;
        for (int rid : sh_->store->held_at(ctx.id())) {
            const auto& r = sh_->store->record(rid);
            if (r.owner == sh_->v && !r.used) own.push_back(rid);
        }
        if (!own.empty()) {
            auto& rng = ctx.rng(sh_->label);
            rid_ = own[rng.below(own.size())];
            weight_ = static_cast<std::int64_t>(own.size());
        }
    }

    void on_round(std::int64_t round, std::span<const Delivery> inbox, Context& ctx) override {
        auto& rng = ctx.rng(sh_->label);
        for (const auto& d : inbox) {
            std::int64_t c = d.msg.f[2];
            if (weight_ == 0 ||
                rng.real() < static_cast<double>(c) / static_cast<double>(weight_ + c))
                rid_ = static_cast<int>(d.msg.f[1]);
            weight_ += c;
        }
        if (round != sched_) return;
        int lvl = sh_->tree->level[ctx.id()];
        if (lvl == 0) {
            if (weight_ > 0) {
                sh_->found = true;
                sh_->rid = rid_;
            }
        } else if (weight_ > 0) {
            std::int64_t len = sh_->store->record(rid_).length;
            ctx.send(sh_->tree->parent_slot[ctx.id()], {{K_SD2, rid_, weight_, len, 0}});
        }
    }

  private:
    Sweep2Shared* sh_;
    std::int64_t sched_ = 0;
    int rid_ = -1;
    std::int64_t weight_ = 0;
};

// ---- deletion broadcast (sweep 3) ----

struct FloodShared {
    NodeId origin;
};

class FloodProgram : public NodeProgram {
  public:
    explicit FloodProgram(FloodShared* sh) : sh_(sh) {}

    void init(Context& ctx) override {
        if (ctx.id() == sh_->origin) {
            informed_ = true;
            for (int s = 0; s < ctx.slots(); ++s) ctx.send(s, {{K_DEL, 0, 0, 0, 0}});
        }
    }

    void on_round(std::int64_t, std::span<const Delivery> inbox, Context& ctx) override {
        if (informed_ || inbox.empty()) return;
        informed_ = true;
        for (int s = 0; s < ctx.slots(); ++s) ctx.send(s, {{K_DEL, 0, 0, 0, 0}});
    }

  private:
    FloodShared* sh_;
    bool informed_ = false;
};

// ---- plain token walks (naive walk, naive tail, parallel naive k-walks) ----

struct TokenShared {
    WalkStore* store;
    struct Start {
        NodeId at;
        int rid;
        std::int64_t base;
    };
    std::vector<Start> starts;
    Positions* positions = nullptr;
    std::string label;
};

class TokenProgram : public NodeProgram {
  public:
    explicit TokenProgram(TokenShared* sh) : sh_(sh) {}

    void init(Context& ctx) override {
        auto& rng = ctx.rng(sh_->label);
        for (const auto& st : sh_->starts) {
            if (st.at != ctx.id()) continue;
            if (sh_->positions) (*sh_->positions)[ctx.id()].push_back(st.base);
            if (sh_->store->record(st.rid).length == 0) {
                sh_->store->finalize(st.rid, ctx.id(), 0);
                continue;
            }
            int slot = ctx.random_neighbor_slot(rng);
            sh_->store->set_next_hop(ctx.id(), st.rid, 0, slot);
            ctx.send_queued(slot, {{K_TOK, st.rid, 1, st.base, 0}});
        }
    }

    void on_round(std::int64_t round, std::span<const Delivery> inbox, Context& ctx) override {
        if (round == 1) return;
        auto& rng = ctx.rng(sh_->label);
        for (const auto& d : inbox) {
            int rid = static_cast<int>(d.msg.f[1]);
            std::int64_t steps = d.msg.f[2];
            std::int64_t base = d.msg.f[3];
            if (sh_->positions) (*sh_->positions)[ctx.id()].push_back(base + steps);
            if (steps == sh_->store->record(rid).length) {
                sh_->store->finalize(rid, ctx.id(), static_cast<int>(steps));
            } else {
                int slot = ctx.random_neighbor_slot(rng);
                sh_->store->set_next_hop(ctx.id(), rid, static_cast<int>(steps), slot);
                ctx.send_queued(slot, {{K_TOK, rid, steps + 1, base, 0}});
            }
        }
    }

  private:
    TokenShared* sh_;
};

// WalkStore::finalize appends to the holder list; plain tokens reuse the
// record machinery but should not re-finalize a record that already has a
// destination.  Records used here are always fresh, so this is safe.

NodeId run_token_walk(const Graph& g, WalkStore& store, NodeId start, std::int64_t len,
                      std::int64_t base, Positions* positions, int rid, std::uint64_t seed,
                      const std::string& label, RoundLog& log, const std::string& phase) {
    TokenShared sh;
    sh.store = &store;
    sh.starts.push_back({start, rid, base});
    sh.positions = positions;
    sh.label = label;
    std::vector<std::unique_ptr<NodeProgram>> progs;
    for (int v = 0; v < g.node_count(); ++v) progs.push_back(std::make_unique<TokenProgram>(&sh));
    Engine eng(g, seed);
    log.absorb(eng.run(progs), phase);
    (void)len;
    return store.record(rid).destination;
}

// ---- Get-More-Walks ----

struct GmwShared {
    WalkStore* store;
    NodeId v;
    std::int64_t lambda;
    std::int64_t walks;
    std::string label;
    // shadow of the per-edge aggregation: which walk instances stand behind
    // each counted message, FIFO per directed edge (from * n + to)
    std::map<std::int64_t, std::deque<int>> wire;
    int n;
};

class GmwProgram : public NodeProgram {
  public:
    explicit GmwProgram(GmwShared* sh) : sh_(sh) {}

    void init(Context& ctx) override {
        if (ctx.id() != sh_->v) return;
        std::vector<int> rids;
        for (std::int64_t i = 0; i < sh_->walks; ++i)
            rids.push_back(sh_->store->add_record(sh_->v, -1));
        forward(rids, 0, ctx);
    }

    void on_round(std::int64_t round, std::span<const Delivery> inbox, Context& ctx) override {
        if (round == 1) return;
        std::int64_t steps = round - 1;
        std::vector<int> arrived;
        for (const auto& d : inbox) {
            auto& q = sh_->wire[static_cast<std::int64_t>(ctx.neighbor(d.slot)) * sh_->n + ctx.id()];
            for (std::int64_t c = 0; c < d.msg.f[1]; ++c) {
                arrived.push_back(q.front());
                q.pop_front();
            }
        }
        if (arrived.empty()) return;
        std::vector<int> survivors;
        if (steps >= sh_->lambda) {
            auto& rng = ctx.rng(sh_->label);
            std::int64_t i = steps - sh_->lambda;  // extension step, 0-based
            for (int rid : arrived) {
                if (rng.real() < 1.0 / static_cast<double>(sh_->lambda - i))
                    sh_->store->finalize(rid, ctx.id(), static_cast<int>(steps));
                else
                    survivors.push_back(rid);
            }
        } else {
            survivors = std::move(arrived);
        }
        forward(survivors, steps, ctx);
    }

  private:
    void forward(const std::vector<int>& rids, std::int64_t steps, Context& ctx) {
        if (rids.empty()) return;
        auto& rng = ctx.rng(sh_->label);
        std::vector<std::int64_t> per_slot(ctx.slots(), 0);
        for (int rid : rids) {
            int slot = ctx.random_neighbor_slot(rng);
            sh_->store->set_next_hop(ctx.id(), rid, static_cast<int>(steps), slot);
            sh_->wire[static_cast<std::int64_t>(ctx.id()) * sh_->n + ctx.neighbor(slot)]
                .push_back(rid);
            ++per_slot[slot];
        }
        for (int s = 0; s < ctx.slots(); ++s)
            if (per_slot[s] > 0) ctx.send(s, {{K_GMW, per_slot[s], 0, 0, 0}});
    }

    GmwShared* sh_;
};

// ---- topology upcast (centralized fallback for very long walks) ----

struct UpcastShared {
    const BfsShared* tree;
};

class UpcastProgram : public NodeProgram {
  public:
    explicit UpcastProgram(UpcastShared* sh) : sh_(sh) {}

    void init(Context& ctx) override {
        if (sh_->tree->level[ctx.id()] == 0) return;
        int parent = sh_->tree->parent_slot[ctx.id()];
        for (int s = 0; s < ctx.slots(); ++s) {
            NodeId u = ctx.neighbor(s);
            if (u > ctx.id()) continue;  // each edge reported by its higher endpoint
            ctx.send_queued(parent, {{K_UP, ctx.id(), u, ctx.multiplicity(s), 0}});
        }
    }

    void on_round(std::int64_t round, std::span<const Delivery> inbox, Context& ctx) override {
        if (round == 1) return;
        if (sh_->tree->level[ctx.id()] == 0) return;  // root just collects
        int parent = sh_->tree->parent_slot[ctx.id()];
        for (const auto& d : inbox) ctx.send_queued(parent, d.msg);
    }

  private:
    UpcastShared* sh_;
};

// ---- regeneration ----

struct RegenShared {
    const WalkStore* store;
    struct Seg {
        NodeId at;
        int rid;
        std::int64_t base;
        bool final;
    };
    std::vector<Seg> segs;
    Positions* positions;
};

class RegenProgram : public NodeProgram {
  public:
    explicit RegenProgram(RegenShared* sh) : sh_(sh) {}

    void init(Context& ctx) override {
        for (const auto& sg : sh_->segs) {
            if (sg.at != ctx.id()) continue;
            (*sh_->positions)[ctx.id()].push_back(sg.base);
            if (sh_->store->record(sg.rid).length == 0) continue;
            int slot = sh_->store->next_hop(ctx.id(), sg.rid, 0);
            if (slot < 0) throw StaleStore("missing relay entry during regeneration");
            ctx.send_queued(slot, {{K_RGN, sg.rid, 1, sg.base, sg.final ? 1 : 0}});
        }
    }

    void on_round(std::int64_t round, std::span<const Delivery> inbox, Context& ctx) override {
        if (round == 1) return;
        for (const auto& d : inbox) {
            int rid = static_cast<int>(d.msg.f[1]);
            std::int64_t step = d.msg.f[2];
            std::int64_t base = d.msg.f[3];
            bool final = d.msg.f[4] != 0;
            if (step == sh_->store->record(rid).length) {
                // a non-final segment end doubles as the next segment's start,
                // which logs the offset itself
                if (final) (*sh_->positions)[ctx.id()].push_back(base + step);
                continue;
            }
            (*sh_->positions)[ctx.id()].push_back(base + step);
            int slot = sh_->store->next_hop(ctx.id(), rid, static_cast<int>(step));
            if (slot < 0) throw StaleStore("missing relay entry during regeneration");
            ctx.send_queued(slot, {{K_RGN, rid, step + 1, base, final ? 1 : 0}});
        }
    }

  private:
    RegenShared* sh_;
};

// ---- path verification ----

struct VerifyShared {
    const Graph* g;
    std::vector<std::vector<std::int64_t>> owned;  // 1-based order numbers per node
    std::int64_t length;
    bool verified = false;
    std::int64_t verdict_round = 0;
};

class VerifyProgram : public NodeProgram {
  public:
    explicit VerifyProgram(VerifyShared* sh) : sh_(sh) {}

    void init(Context& ctx) override {
        sent_.resize(ctx.slots());
        const auto& own = sh_->owned[ctx.id()];
        for (std::int64_t p : own) add_interval(p, p);
        bool self_loop = sh_->g->multiplicity(ctx.id(), ctx.id()) > 0;
        for (std::int64_t p : own)
            if (self_loop && std::binary_search(own.begin(), own.end(), p + 1))
                add_interval(p, p + 1);
        for (std::int64_t p : own)
            for (int s = 0; s < ctx.slots(); ++s) ctx.send_queued(s, {{K_ANN, p, 0, 0, 0}});
        check_done(0);
        flush(ctx);
    }

    void on_round(std::int64_t round, std::span<const Delivery> inbox, Context& ctx) override {
        if (round == 1) return;
        const auto& own = sh_->owned[ctx.id()];
        for (const auto& d : inbox) {
            if (d.msg.f[0] == K_ANN) {
                std::int64_t p = d.msg.f[1];
                // the message arrived over a real edge, so adjacency holds
                if (std::binary_search(own.begin(), own.end(), p + 1)) add_interval(p, p + 1);
            } else {
                add_interval(d.msg.f[1], d.msg.f[2]);
            }
        }
        check_done(round);
        flush(ctx);
    }

  private:
    void add_interval(std::int64_t lo, std::int64_t hi) {
        // merge with any interval sharing a position
        auto it = intervals_.lower_bound({lo, lo});
        if (it != intervals_.begin()) {
            auto prev = std::prev(it);
            if (prev->second >= lo) it = prev;
        }
        while (it != intervals_.end() && it->first <= hi) {
            lo = std::min(lo, it->first);
            hi = std::max(hi, it->second);
            it = intervals_.erase(it);
        }
        intervals_.insert({lo, hi});
    }

    void check_done(std::int64_t round) {
        if (sh_->verified) return;
        if (intervals_.count({1, sh_->length})) {
            sh_->verified = true;
            sh_->verdict_round = round;
        }
    }

    void flush(Context& ctx) {
        for (int s = 0; s < static_cast<int>(sent_.size()); ++s)
            for (const auto& iv : intervals_)
                if (sent_[s].insert(iv).second)
                    ctx.send_queued(s, {{K_INT, iv.first, iv.second, 0, 0}});
    }

    VerifyShared* sh_;
    std::set<std::pair<std::int64_t, std::int64_t>> intervals_;
    std::vector<std::set<std::pair<std::int64_t, std::int64_t>>> sent_;
};

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t salt, std::string_view tag) {
    return derive_rng(seed, salt, tag).next_u64();
}

}  // namespace

// ---- public operations ----

WalkResult naive_walk(const Graph& g, NodeId s, std::int64_t ell, std::uint64_t seed) {
    check_node(g, s);
    if (ell < 0) throw UnsatisfiableParams("walk length must be nonnegative");
    WalkResult res;
    res.source = s;
    res.ell = ell;
    res.store = std::make_shared<WalkStore>(g.node_count());
    int rid = res.store->add_record(s, static_cast<int>(ell));
    res.endpoint = run_token_walk(g, *res.store, s, ell, 0, &res.positions, rid, seed, "naive",
                                  res.round_log, "naive");
    res.segments.push_back({rid, 0});
    res.connectors.push_back({s, 0});
    if (ell > 0) res.connectors.push_back({res.endpoint, ell});
    for (auto& [v, offs] : res.positions) std::sort(offs.begin(), offs.end());
    return res;
}

std::shared_ptr<WalkStore> phase1_generate(const Graph& g, int eta, std::int64_t lambda,
                                           std::uint64_t seed, RoundLog& log) {
    if (eta < 1 || lambda < 1) throw UnsatisfiableParams("eta and lambda must be positive");
    auto store = std::make_shared<WalkStore>(g.node_count());
    Phase1Shared sh{store.get(), eta, lambda};
    std::vector<std::unique_ptr<NodeProgram>> progs;
    for (int v = 0; v < g.node_count(); ++v) progs.push_back(std::make_unique<Phase1Program>(&sh));
    Engine eng(g, seed);
    log.absorb(eng.run(progs), "phase1");
    return store;
}

SampleOutcome sample_destination(const Graph& g, WalkStore& store, NodeId v, std::uint64_t seed,
                                 int invocation, RoundLog& log) {
    check_node(g, v);
    RoundLog local;
    BfsShared tree = run_bfs(g, v, sub_seed(seed, invocation, "sd.bfs"), local,
                             "sample_dest.bfs");

    Sweep2Shared sw;
    sw.store = &store;
    sw.v = v;
    sw.tree = &tree;
    sw.label = "sd." + std::to_string(invocation);
    {
        std::vector<std::unique_ptr<NodeProgram>> progs;
        for (int u = 0; u < g.node_count(); ++u)
            progs.push_back(std::make_unique<Sweep2Program>(&sw));
        Engine eng(g, seed);
        local.absorb(eng.run(progs), "sample_dest.convergecast");
    }

    SampleOutcome out;
    if (sw.found) {
        out.found = true;
        out.record_id = sw.rid;
        const auto& rec = store.record(sw.rid);
        out.destination = rec.destination;
        out.length = rec.length;
        out.distance = tree.level[rec.destination];
        store.record(sw.rid).used = true;
        if (rec.destination != v) {
            FloodShared fl{v};
            std::vector<std::unique_ptr<NodeProgram>> progs;
            for (int u = 0; u < g.node_count(); ++u)
                progs.push_back(std::make_unique<FloodProgram>(&fl));
            Engine eng(g, seed);
            local.absorb(eng.run(progs), "sample_dest.delete");
        }
    }

    if (local.total_rounds > 3 * static_cast<std::int64_t>(tree.depth) + 3)
        throw Error("sample_destination exceeded its 3*depth+3 round budget");
    log.total_rounds += local.total_rounds;
    log.messages_delivered += local.messages_delivered;
    log.max_edge_queue = std::max(log.max_edge_queue, local.max_edge_queue);
    for (const auto& [k, r] : local.phase_breakdown) log.phase_breakdown[k] += r;
    return out;
}

void get_more_walks(const Graph& g, WalkStore& store, NodeId v, std::int64_t ell,
                    std::int64_t lambda, std::uint64_t seed, int invocation, RoundLog& log) {
    check_node(g, v);
    if (lambda < 1 || lambda > ell)
        throw UnsatisfiableParams("get_more_walks requires 1 <= lambda <= ell");
    GmwShared sh;
    sh.store = &store;
    sh.v = v;
    sh.lambda = lambda;
    sh.walks = ell / lambda;
    sh.label = "gmw." + std::to_string(invocation);
    sh.n = g.node_count();
    std::vector<std::unique_ptr<NodeProgram>> progs;
    for (int u = 0; u < g.node_count(); ++u) progs.push_back(std::make_unique<GmwProgram>(&sh));
    Engine eng(g, seed);
    RoundLog local = eng.run(progs);
    if (local.total_rounds > 2 * lambda + 2)
        throw Error("get_more_walks exceeded its 2*lambda+2 round budget");
    log.absorb(local, "gmw");
}

namespace {

// Stitch phase: repeatedly sample a precomputed short walk from the current
// endpoint until fewer than 2*lambda steps remain, then walk the tail naively.
void stitch_phase2(const Graph& g, WalkResult& res, std::uint64_t seed, int& counter) {
    auto& store = *res.store;
    NodeId cur = res.source;
    std::int64_t done = 0;
    res.connectors.push_back({cur, 0});
    while (done <= res.ell - 2 * res.lambda) {
        auto out = sample_destination(g, store, cur, seed, counter++, res.round_log);
        if (!out.found) {
            get_more_walks(g, store, cur, res.ell, res.lambda, seed, counter++, res.round_log);
            ++res.gmw_invocations;
            out = sample_destination(g, store, cur, seed, counter++, res.round_log);
            if (!out.found) throw Error("no short walk available after get_more_walks");
        }
        // relay the walk token to the sampled destination along the BFS tree
        res.round_log.add_rounds(out.distance, "phase2.relay");
        res.round_log.messages_delivered += out.distance;
        res.segments.push_back({out.record_id, done});
        done += out.length;
        cur = out.destination;
        res.connectors.push_back({cur, done});
    }
    std::int64_t tail = res.ell - done;
    int rid = store.add_record(cur, static_cast<int>(tail));
    res.endpoint = run_token_walk(g, store, cur, tail, done, nullptr, rid,
                                  sub_seed(seed, counter, "tail"),
                                  "tail." + std::to_string(counter++), res.round_log,
                                  "phase2.naive_tail");
    res.segments.push_back({rid, done});
    res.connectors.push_back({res.endpoint, res.ell});
}

WalkResult centralized_walk(const Graph& g, NodeId s, std::int64_t ell, std::int64_t lambda,
                            std::uint64_t seed) {
    WalkResult res;
    res.source = s;
    res.ell = ell;
    res.lambda = lambda;
    BfsShared tree = run_bfs(g, s, sub_seed(seed, 0, "central.bfs"), res.round_log,
                             "central.bfs");
    UpcastShared up{&tree};
    std::vector<std::unique_ptr<NodeProgram>> progs;
    for (int v = 0; v < g.node_count(); ++v) progs.push_back(std::make_unique<UpcastProgram>(&up));
    Engine eng(g, seed);
    res.round_log.absorb(eng.run(progs), "central.upcast");

    // the root now knows the topology and walks locally
    res.store = std::make_shared<WalkStore>(g.node_count());
    int rid = res.store->add_record(s, static_cast<int>(ell));
    Rng rng = derive_rng(seed, static_cast<std::uint64_t>(s), "central.walk");
    NodeId cur = s;
    res.positions[cur].push_back(0);
    for (std::int64_t t = 0; t < ell; ++t) {
        int slot = g.sample_neighbor_slot(cur, rng.below(static_cast<std::uint64_t>(g.degree(cur))));
        res.store->set_next_hop(cur, rid, static_cast<int>(t), slot);
        cur = g.adj(cur)[slot].neighbor;
        res.positions[cur].push_back(t + 1);
    }
    res.store->finalize(rid, cur, static_cast<int>(ell));
    res.endpoint = cur;
    res.segments.push_back({rid, 0});
    res.connectors.push_back({s, 0});
    res.connectors.push_back({cur, ell});
    for (auto& [v, offs] : res.positions) std::sort(offs.begin(), offs.end());
    return res;
}

}  // namespace

WalkResult single_random_walk(const Graph& g, NodeId s, std::int64_t ell,
                              const WalkParams& params, std::uint64_t seed) {
    check_node(g, s);
    if (ell < 0) throw UnsatisfiableParams("walk length must be nonnegative");
    std::int64_t lambda = params.lambda;
    if (lambda <= 0) {
        int D = diameter(g);
        lambda = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(
                   std::ceil(params.c_lambda * std::sqrt(static_cast<double>(ell) * D))));
    }
    if (ell == 0 || lambda > ell) {
        WalkResult res = naive_walk(g, s, ell, seed);
        res.lambda = lambda;
        res.eta = params.eta;
        return res;
    }
    if (ell > g.edge_count() * g.edge_count()) return centralized_walk(g, s, ell, lambda, seed);

    WalkResult res;
    res.source = s;
    res.ell = ell;
    res.lambda = lambda;
    res.eta = params.eta;
    res.store = phase1_generate(g, params.eta, lambda, seed, res.round_log);
    int counter = 0;
    stitch_phase2(g, res, seed, counter);
    return res;
}

KWalksResult many_random_walks(const Graph& g, const std::vector<NodeId>& sources,
                               std::int64_t ell, std::uint64_t seed, double c_lambda) {
    if (sources.empty()) throw UnsatisfiableParams("need at least one source");
    for (NodeId s : sources) check_node(g, s);
    if (ell < 0) throw UnsatisfiableParams("walk length must be nonnegative");
    std::int64_t k = static_cast<std::int64_t>(sources.size());
    int D = diameter(g);
    KWalksResult kr;
    kr.lambda = static_cast<std::int64_t>(std::ceil(
        c_lambda * (std::sqrt(static_cast<double>(k) * static_cast<double>(ell) * D) +
                    static_cast<double>(k))));
    kr.lambda = std::max<std::int64_t>(1, kr.lambda);

    if (kr.lambda > ell || ell == 0) {
        // all k tokens walk naively in parallel, sharing edge bandwidth
        kr.naive_fallback = true;
        auto store = std::make_shared<WalkStore>(g.node_count());
        TokenShared sh;
        sh.store = store.get();
        sh.label = "knaive";
        for (std::int64_t i = 0; i < k; ++i) {
            int rid = store->add_record(sources[i], static_cast<int>(ell));
            sh.starts.push_back({sources[i], rid, 0});
        }
        std::vector<std::unique_ptr<NodeProgram>> progs;
        for (int v = 0; v < g.node_count(); ++v)
            progs.push_back(std::make_unique<TokenProgram>(&sh));
        Engine eng(g, seed);
        kr.combined.absorb(eng.run(progs), "naive_parallel");
        for (std::int64_t i = 0; i < k; ++i) {
            WalkResult res;
            res.source = sources[i];
            res.ell = ell;
            res.lambda = kr.lambda;
            res.endpoint = store->record(static_cast<int>(i)).destination;
            res.connectors.push_back({res.source, 0});
            if (ell > 0) res.connectors.push_back({res.endpoint, ell});
            res.store = store;
            res.segments.push_back({static_cast<int>(i), 0});
            res.round_log = kr.combined;
            kr.walks.push_back(std::move(res));
        }
        return kr;
    }

    auto store = phase1_generate(g, 1, kr.lambda, seed, kr.combined);
    int counter = 0;
    for (std::int64_t i = 0; i < k; ++i) {
        WalkResult res;
        res.source = sources[i];
        res.ell = ell;
        res.lambda = kr.lambda;
        res.store = store;
        stitch_phase2(g, res, sub_seed(seed, static_cast<std::uint64_t>(i), "kwalk"), counter);
        kr.combined.absorb(res.round_log, "walk." + std::to_string(i));
        kr.walks.push_back(std::move(res));
    }
    return kr;
}

WalkResult regenerate_walk(const Graph& g, const WalkResult& result, std::uint64_t seed) {
    if (!result.store) throw StaleStore("walk trajectories were dropped");
    WalkResult res = result;
    res.positions.clear();
    if (res.ell == 0 || res.segments.empty()) {
        res.positions[res.source].push_back(0);
        return res;
    }
    RegenShared sh;
    sh.store = res.store.get();
    sh.positions = &res.positions;
    for (std::size_t i = 0; i < res.segments.size(); ++i) {
        auto [rid, base] = res.segments[i];
        const auto& rec = res.store->record(rid);
        if (rec.destination < 0) throw StaleStore("segment record was never completed");
        sh.segs.push_back({rec.owner, rid, base, i + 1 == res.segments.size()});
    }
    std::vector<std::unique_ptr<NodeProgram>> progs;
    for (int v = 0; v < g.node_count(); ++v) progs.push_back(std::make_unique<RegenProgram>(&sh));
    Engine eng(g, seed);
    res.round_log.absorb(eng.run(progs), "regenerate");
    for (auto& [v, offs] : res.positions) std::sort(offs.begin(), offs.end());
    return res;
}

VerifyResult verify_path(const Graph& g, const std::vector<NodeId>& sequence,
                         std::uint64_t seed) {
    (void)seed;  // fully deterministic
    if (sequence.empty()) throw UnsatisfiableParams("sequence must be nonempty");
    for (NodeId v : sequence) check_node(g, v);
    VerifyShared sh;
    sh.g = &g;
    sh.owned.resize(g.node_count());
    sh.length = static_cast<std::int64_t>(sequence.size());
    for (std::size_t i = 0; i < sequence.size(); ++i)
        sh.owned[sequence[i]].push_back(static_cast<std::int64_t>(i) + 1);
    for (auto& v : sh.owned) std::sort(v.begin(), v.end());
    std::vector<std::unique_ptr<NodeProgram>> progs;
    for (int v = 0; v < g.node_count(); ++v) progs.push_back(std::make_unique<VerifyProgram>(&sh));
    Engine eng(g, 0);
    VerifyResult out;
    out.round_log = eng.run(progs);
    out.verified = sh.verified;
    out.verdict_round = sh.verdict_round;
    return out;
}

}  // namespace walks
