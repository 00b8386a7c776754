#pragma once

// Trial-level parallelism: a sampling campaign runs the same protocol for
// trials seed+0..seed+trials-1, and each trial owns its engine, so trials are
// independent by construction.  The OpenMP runner must produce output
// identical to the serial reference (each trial writes only its own slot);
// tests compare the two and tools/bench_trials measures the speedup.

#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace walks {

// Serial reference: fn(t) for t = 0..trials-1 in order.
template <typename F>
void for_each_trial_serial(int trials, F&& fn) {
    for (int t = 0; t < trials; ++t) fn(t);
}

// OpenMP runner; falls back to serial when built without OpenMP.
template <typename F>
void for_each_trial_parallel(int trials, F&& fn) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < trials; ++t) fn(t);
#else
    for_each_trial_serial(trials, fn);
#endif
}

template <typename F>
void for_each_trial(int trials, bool parallel, F&& fn) {
    if (parallel)
        for_each_trial_parallel(trials, fn);
    else
        for_each_trial_serial(trials, fn);
}

}  // namespace walks
