// Compares the serial trial runner against the OpenMP one on a sampling
// campaign and checks that both produce identical outputs.

#include <chrono>
#include <cstdio>
#include <vector>

#include "walks/graph.hpp"
#include "walks/parallel.hpp"
#include "walks/protocols.hpp"

using namespace walks;

namespace {

double time_runner(const Graph& g, int trials, bool parallel, std::vector<NodeId>& endpoints) {
    endpoints.assign(trials, -1);
    auto t0 = std::chrono::steady_clock::now();
    for_each_trial(trials, parallel, [&](int t) {
        WalkParams params;
        auto w = single_random_walk(g, 0, 2048, params, 1000 + t);
        endpoints[t] = w.endpoint;
    });
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int trials = argc > 1 ? std::atoi(argv[1]) : 32;
    Graph g = generate_hypercube(8);
    std::vector<NodeId> serial_ends, parallel_ends;
    double ts = time_runner(g, trials, false, serial_ends);
    double tp = time_runner(g, trials, true, parallel_ends);
    bool identical = serial_ends == parallel_ends;
    std::printf("trials=%d serial=%.3fs openmp=%.3fs speedup=%.2fx identical=%s\n", trials, ts,
                tp, ts / tp, identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
