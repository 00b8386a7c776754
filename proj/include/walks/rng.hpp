#pragma once

#include <cstdint>
#include <string_view>

namespace walks {

// splitmix64 step (Steele et al.); also used to mix seed material.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Small deterministic PRNG. Platform-independent output, which keeps
// transcripts and reports byte-identical across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // decorrelate trivially related seeds
        (void)splitmix64_next(state_);
    }

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // unbiased integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        // Lemire's rejection method
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t t = -n % n;
            while (lo < t) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // uniform double in [0, 1) with 53 random bits
    double real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return real() < p; }

  private:
    std::uint64_t state_;
};

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Independent reproducible substream per (seed, node, label).
inline Rng derive_rng(std::uint64_t seed, std::uint64_t node, std::string_view label) {
    std::uint64_t s = seed;
    (void)splitmix64_next(s);
    s ^= 0x632be59bd9b4e019ULL ^ node;
    (void)splitmix64_next(s);
    s ^= fnv1a64(label);
    return Rng(splitmix64_next(s));
}

}  // namespace walks
