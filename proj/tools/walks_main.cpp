#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>

#include <CLI11.hpp>

#include "walks/errors.hpp"
#include "walks/json_io.hpp"
#include "walks/mixing.hpp"
#include "walks/parallel.hpp"
#include "walks/protocols.hpp"
#include "walks/rng.hpp"
#include "walks/rst.hpp"
#include "walks/validate.hpp"

namespace {

using walks::json;

void write_file(const std::string& path, const std::string& content) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw walks::ConfigError("cannot write " + path);
    out << content;
}

std::string csv_header() {
    return "trial,seed,ell,rounds,endpoint,phase1_rounds,phase2_rounds,gmw_invocations\n";
}

std::string csv_row(int trial, std::uint64_t seed, const walks::WalkResult& w) {
    return std::to_string(trial) + "," + std::to_string(seed) + "," + std::to_string(w.ell) +
           "," + std::to_string(w.round_log.total_rounds) + "," + std::to_string(w.endpoint) +
           "," + std::to_string(walks::phase1_rounds(w.round_log)) + "," +
           std::to_string(walks::phase2_rounds(w.round_log)) + "," +
           std::to_string(w.gmw_invocations) + "\n";
}

int run_config(const std::string& path, bool parallel) {
    std::ifstream in(path);
    if (!in) throw walks::ConfigError("cannot open config " + path);
    json j;
    in >> j;
    auto cfg = walks::parse_config(j);
    if (const char* env = std::getenv("WALKS_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
    walks::Graph g = walks::build_graph_from_spec(cfg.graph);

    json results = json::array();
    std::string csv = csv_header();
    int violations = 0;

    if (cfg.protocol == "walk") {
        std::int64_t ell = cfg.params.at("ell").get<std::int64_t>();
        walks::WalkParams params;
        params.eta = cfg.params.value("eta", 1);
        params.c_lambda = cfg.params.value("c_lambda", 1.0);
        params.lambda = cfg.params.value("lambda", std::int64_t{0});
        walks::NodeId source = cfg.params.value("source", 0);
        std::vector<walks::WalkResult> ws(cfg.trials);
        walks::for_each_trial(cfg.trials, parallel, [&](int t) {
            ws[t] = walks::single_random_walk(g, source, ell, params, cfg.seed + t);
            ws[t].drop_trajectories();
        });
        for (int t = 0; t < cfg.trials; ++t) {
            results.push_back(walks::walk_result_to_json(ws[t]));
            csv += csv_row(t, cfg.seed + t, ws[t]);
        }
    } else if (cfg.protocol == "kwalk") {
        std::int64_t ell = cfg.params.at("ell").get<std::int64_t>();
        std::vector<walks::NodeId> sources;
        if (cfg.params.contains("sources"))
            sources = cfg.params.at("sources").get<std::vector<walks::NodeId>>();
        else
            for (int i = 0; i < cfg.params.at("k").get<int>(); ++i)
                sources.push_back(i % g.node_count());
        for (int t = 0; t < cfg.trials; ++t) {
            auto kr = walks::many_random_walks(g, sources, ell, cfg.seed + t,
                                               cfg.params.value("c_lambda", 1.0));
            json walks_j = json::array();
            for (auto& w : kr.walks) {
                w.drop_trajectories();
                walks_j.push_back(walks::walk_result_to_json(w));
                csv += csv_row(t, cfg.seed + t, w);
            }
            results.push_back({{"lambda", kr.lambda},
                               {"naive_fallback", kr.naive_fallback},
                               {"round_log", walks::round_log_to_json(kr.combined)},
                               {"walks", walks_j}});
        }
    } else if (cfg.protocol == "rst") {
        walks::NodeId root = cfg.params.value("root", 0);
        std::vector<json> rows(cfg.trials);
        walks::for_each_trial(cfg.trials, parallel, [&](int t) {
            walks::RoundLog lg;
            auto tr = walks::random_spanning_tree(g, root, cfg.seed + t, lg);
            rows[t] = {{"tree", walks::spanning_tree_to_json(tr)},
                       {"round_log", walks::round_log_to_json(lg)}};
        });
        for (auto& row : rows) results.push_back(std::move(row));
    } else if (cfg.protocol == "mixing") {
        walks::MixingConfig mc;
        mc.samples = cfg.params.value("K", std::int64_t{0});
        mc.epsilon = cfg.params.value("epsilon", 0.0);
        mc.reps = cfg.params.value("reps", 3);
        mc.max_ell = cfg.params.value("max_ell", std::int64_t{1} << 20);
        walks::NodeId source = cfg.params.value("source", 0);
        for (int t = 0; t < cfg.trials; ++t) {
            walks::RoundLog lg;
            auto est = walks::estimate_mixing_time(g, source, mc, cfg.seed + t, lg);
            auto sb = walks::spectral_bounds(est, g.node_count());
            results.push_back({{"estimate", walks::mixing_estimate_to_json(est)},
                               {"gap", {sb.gap.first, sb.gap.second}},
                               {"conductance", {sb.conductance.first, sb.conductance.second}},
                               {"round_log", walks::round_log_to_json(lg)}});
            for (const auto& [ell, pass] : est.transcript)
                csv += std::to_string(t) + "," + std::to_string(cfg.seed + t) + "," +
                       std::to_string(ell) + ",,,,," + (pass ? "PASS" : "FAIL") + "\n";
        }
    } else if (cfg.protocol == "verify-path") {
        auto seq = cfg.params.at("sequence").get<std::vector<walks::NodeId>>();
        for (int t = 0; t < cfg.trials; ++t) {
            auto vr = walks::verify_path(g, seq, cfg.seed + t);
            results.push_back({{"verified", vr.verified},
                               {"verdict_round", vr.verdict_round},
                               {"round_log", walks::round_log_to_json(vr.round_log)}});
        }
    } else if (cfg.protocol == "scaling") {
        auto ells = cfg.params.at("ells").get<std::vector<std::int64_t>>();
        walks::NodeId source = cfg.params.value("source", 0);
        int D = walks::diameter(g);
        json rows = json::array();
        std::vector<double> lx, ly;
        for (std::int64_t ell : ells) {
            std::vector<std::int64_t> rounds(cfg.trials), p1(cfg.trials);
            std::vector<walks::NodeId> ends(cfg.trials);
            std::vector<int> gmw(cfg.trials);
            walks::for_each_trial(cfg.trials, parallel, [&](int t) {
                walks::WalkParams params;
                auto w = walks::single_random_walk(g, source, ell, params, cfg.seed + t);
                rounds[t] = w.round_log.total_rounds;
                p1[t] = walks::phase1_rounds(w.round_log);
                ends[t] = w.endpoint;
                gmw[t] = w.gmw_invocations;
            });
            double mean = std::accumulate(rounds.begin(), rounds.end(), 0.0) / cfg.trials;
            rows.push_back({{"ell", ell},
                            {"D", D},
                            {"n", g.node_count()},
                            {"mean_rounds", mean},
                            {"naive_rounds", ell},
                            {"trials", cfg.trials}});
            for (int t = 0; t < cfg.trials; ++t)
                csv += std::to_string(t) + "," + std::to_string(cfg.seed + t) + "," +
                       std::to_string(ell) + "," + std::to_string(rounds[t]) + "," +
                       std::to_string(ends[t]) + "," + std::to_string(p1[t]) + "," +
                       std::to_string(rounds[t] - p1[t]) + "," + std::to_string(gmw[t]) + "\n";
            lx.push_back(std::log2(static_cast<double>(ell)));
            ly.push_back(std::log2(mean));
        }
        json report{{"rows", rows}};
        std::set<std::int64_t> distinct(ells.begin(), ells.end());
        if (distinct.size() >= 4) {
            int np = static_cast<int>(lx.size());
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (int i = 0; i < np; ++i) {
                sx += lx[i];
                sy += ly[i];
                sxx += lx[i] * lx[i];
                sxy += lx[i] * ly[i];
            }
            double slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
            double intercept = (sy - slope * sx) / np;
            double sse = 0;
            for (int i = 0; i < np; ++i) {
                double e = ly[i] - (slope * lx[i] + intercept);
                sse += e * e;
            }
            double se = np > 2 ? std::sqrt(sse / (np - 2) / (sxx - sx * sx / np)) : 0.0;
            // t quantile for the small dfs that arise in practice
            double tq = np - 2 == 1 ? 12.706 : np - 2 == 2 ? 4.303 : np - 2 == 3 ? 3.182 : 2.0;
            report["slope"] = slope;
            report["slope_ci95"] = {slope - tq * se, slope + tq * se};
        }
        results.push_back(report);
    }

    json out{{"protocol", cfg.protocol}, {"seed", cfg.seed}, {"trials", cfg.trials},
             {"results", results}};
    write_file(cfg.out_json, out.dump(2) + "\n");
    write_file(cfg.out_csv, csv);
    std::cout << "protocol=" << cfg.protocol << " trials=" << cfg.trials
              << " seed=" << cfg.seed << " done\n";
    return violations == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CONGEST random-walk simulator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
    std::string config_path;
    bool serial = false;
    run->add_option("--config", config_path, "config file")->required();
    run->add_flag("--serial", serial, "disable trial-level parallelism");

    auto* validate = app.add_subcommand("validate", "run the acceptance suite");
    std::string level = "quick";
    std::uint64_t vseed = 1;
    std::string vout;
    validate->add_option("--level", level, "quick|full");
    validate->add_option("--seed", vseed, "suite seed");
    validate->add_option("--out", vout, "report file");

    auto* gen = app.add_subcommand("gen-graph", "generate a graph JSON file");
    std::string kind, out_path;
    int gn = 0, gdim = 0, grows = 0, gcols = 0, gd = 0, gk = 0, gleaves = 0;
    double gp = 0;
    std::uint64_t gseed = 1;
    gen->add_option("--kind", kind)->required();
    gen->add_option("--out", out_path)->required();
    gen->add_option("--n", gn);
    gen->add_option("--dim", gdim);
    gen->add_option("--rows", grows);
    gen->add_option("--cols", gcols);
    gen->add_option("--d", gd);
    gen->add_option("--k", gk);
    gen->add_option("--leaves", gleaves);
    gen->add_option("--p", gp);
    gen->add_option("--seed", gseed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return run_config(config_path, !serial);
        if (*validate) {
            if (const char* env = std::getenv("WALKS_SEED"))
                vseed = std::strtoull(env, nullptr, 10);
            auto rep = walks::run_validation(level, vseed);
            std::string text = walks::report_to_text(rep);
            std::cout << text;
            write_file(vout, text);
            return 0;
        }
        if (*gen) {
            walks::json spec{{"kind", kind}};
            if (gn) spec["n"] = gn;
            if (gdim) spec["dim"] = gdim;
            if (grows) spec["rows"] = grows;
            if (gcols) spec["cols"] = gcols;
            if (gd) spec["d"] = gd;
            if (gk) spec["k"] = gk;
            if (gleaves) spec["leaves"] = gleaves;
            if (gp) spec["p"] = gp;
            if (kind == "erdos_renyi" || kind == "random_regular") spec["seed"] = gseed;
            walks::Graph g = walks::build_graph_from_spec(spec);
            write_file(out_path, walks::graph_to_json(g).dump(2) + "\n");
            std::cout << "wrote " << out_path << " (n=" << g.node_count()
                      << ", m=" << g.edge_count() << ")\n";
            return 0;
        }
    } catch (const walks::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const walks::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
