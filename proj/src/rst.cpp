#include "walks/rst.hpp"

#include <algorithm>
#include <memory>
#include <vector>

#include "walks/errors.hpp"
#include "walks/rng.hpp"

namespace walks {

namespace {

// one-shot flood from the root; used once to build the BFS schedule and once
// per phase to broadcast the cover verdict
class FloodOnce : public NodeProgram {
  public:
    explicit FloodOnce(NodeId origin) : origin_(origin) {}
    void init(Context& ctx) override {
        if (ctx.id() == origin_) emit(ctx);
    }
    void on_round(std::int64_t, std::span<const Delivery> inbox, Context& ctx) override {
        if (!done_ && !inbox.empty()) emit(ctx);
    }

  private:
    void emit(Context& ctx) {
        done_ = true;
        for (int s = 0; s < ctx.slots(); ++s) ctx.send(s, {{1, 0, 0, 0, 0}});
    }
    NodeId origin_;
    bool done_ = false;
};

struct CoverShared {
    const BfsTree* tree;
    const std::vector<char>* visited;
    std::int64_t root_count = 0;
};

// level-scheduled convergecast of visited-node counts up the BFS tree
class CoverCount : public NodeProgram {
  public:
    CoverCount(CoverShared* sh, const Graph* g) : sh_(sh), g_(g) {}

    std::int64_t pending_until() const override { return sched_; }

    void init(Context& ctx) override {
        sched_ = sh_->tree->depth - sh_->tree->level[ctx.id()] + 1;
        count_ = (*sh_->visited)[ctx.id()] ? 1 : 0;
    }

    void on_round(std::int64_t round, std::span<const Delivery> inbox, Context& ctx) override {
        for (const auto& d : inbox) count_ += d.msg.f[1];
        if (round != sched_) return;
        if (sh_->tree->level[ctx.id()] == 0) {
            sh_->root_count = count_;
        } else {
            int pslot = g_->slot_of(ctx.id(), sh_->tree->parent[ctx.id()]);
            ctx.send(pslot, {{2, count_, 0, 0, 0}});
        }
    }

  private:
    CoverShared* sh_;
    const Graph* g_;
    std::int64_t sched_ = 0;
    std::int64_t count_ = 0;
};

void run_flood(const Graph& g, NodeId origin, RoundLog& log, const std::string& phase) {
    std::vector<std::unique_ptr<NodeProgram>> progs;
    for (int v = 0; v < g.node_count(); ++v) progs.push_back(std::make_unique<FloodOnce>(origin));
    Engine eng(g, 0);
    log.absorb(eng.run(progs), phase);
}

}  // namespace

SpanningTree first_visit_edges(const Graph& g, const Positions& positions) {
    std::int64_t ell = -1;
    for (const auto& [v, offs] : positions)
        for (std::int64_t o : offs) ell = std::max(ell, o);
    if (ell < 0) throw NotCovering("empty walk");
    std::vector<NodeId> seq(static_cast<std::size_t>(ell) + 1, -1);
    for (const auto& [v, offs] : positions)
        for (std::int64_t o : offs) seq[static_cast<std::size_t>(o)] = v;
    std::vector<char> seen(g.node_count(), 0);
    for (NodeId v : seq)
        if (v >= 0) seen[v] = 1;
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (!seen[v]) throw NotCovering("walk does not visit node " + std::to_string(v));

    SpanningTree tree;
    tree.root = seq[0];
    tree.final_ell = ell;
    std::vector<char> entered(g.node_count(), 0);
    entered[seq[0]] = 1;
    for (std::size_t t = 1; t < seq.size(); ++t) {
        NodeId v = seq[t];
        if (entered[v]) continue;
        entered[v] = 1;
        tree.tree_edges.insert({v, seq[t - 1]});
    }
    return tree;
}

SpanningTree random_spanning_tree(const Graph& g, NodeId root, std::uint64_t seed,
                                  RoundLog& log) {
    if (root < 0 || root >= g.node_count()) throw InvalidNodeId("bad root");
    if (g.node_count() < 2) throw UnsatisfiableParams("need at least two nodes");

    BfsTree tree = bfs_tree(g, root);
    run_flood(g, root, log, "rst.bfs");  // distribute the schedule once

    Positions total;
    std::vector<char> visited(g.node_count(), 0);
    NodeId cur = root;
    std::int64_t done = 0;
    std::int64_t ell = g.node_count();
    int phase = 0;
    while (true) {
        ++phase;
        std::int64_t delta = ell - done;
        WalkParams params;
        auto w = single_random_walk(g, cur, delta,  params,
                                    derive_rng(seed, static_cast<std::uint64_t>(phase), "rst.walk")
                                        .next_u64());
        auto wr = regenerate_walk(g, w,
                                  derive_rng(seed, static_cast<std::uint64_t>(phase), "rst.regen")
                                      .next_u64());
        log.absorb(wr.round_log, "rst.walk");
        for (const auto& [v, offs] : wr.positions) {
            visited[v] = 1;
            auto& dst = total[v];
            for (std::int64_t o : offs) dst.push_back(o + done);
        }
        done = ell;
        cur = w.endpoint;

        CoverShared cs;
        cs.tree = &tree;
        cs.visited = &visited;
        {
            std::vector<std::unique_ptr<NodeProgram>> progs;
            for (int v = 0; v < g.node_count(); ++v)
                progs.push_back(std::make_unique<CoverCount>(&cs, &g));
            Engine eng(g, 0);
            log.absorb(eng.run(progs), "rst.cover_check");
        }
        run_flood(g, root, log, "rst.cover_check");  // verdict broadcast

        if (cs.root_count == g.node_count()) break;
        ell *= 2;
    }

    SpanningTree out = first_visit_edges(g, total);
    out.phase_count = phase;
    out.final_ell = ell;
    return out;
}

}  // namespace walks
