#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dmnai {

// splitmix64 finalizer. Every derived seed in the project goes through this
// so that nearby master seeds / stream indices land on unrelated states.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stream indices reserved for non-replica draws (graph generation, seed
// selection rules). Replica indices are small, so these cannot collide.
inline constexpr std::uint64_t kGraphStream = 0xFFFFFFFF00000001ULL;
inline constexpr std::uint64_t kSeedRuleStream = 0xFFFFFFFF00000002ULL;

// Deterministic 64-bit generator. mt19937_64 has a standardized sequence,
// and all sampling helpers below avoid std::*_distribution (whose output is
// implementation-defined), so a (seed, draw index) pair always yields the
// same value.
class RngStream {
public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    result_type operator()() { return engine_(); }

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }

private:
    std::mt19937_64 engine_;
};

// Stream for replica `index` of a run with seed `master_seed`. The mapping
// is mix64(mix64(master_seed) + index): a pure function of its arguments,
// independent of how many replicas run or in which order.
inline RngStream derive_replica_rng(std::uint64_t master_seed, std::uint64_t index) {
    return RngStream(mix64(mix64(master_seed) + index));
}

// Uniform integer in [0, n), n >= 1, by masked rejection. Bias-free and
// portable. n == 1 consumes no draw.
inline std::uint64_t uniform_below(RngStream& rng, std::uint64_t n) {
    if (n <= 1) {
        return 0;
    }
    std::uint64_t mask = ~std::uint64_t{0} >> __builtin_clzll(n - 1);
    for (;;) {
        const std::uint64_t r = rng() & mask;
        if (r < n) {
            return r;
        }
    }
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(RngStream& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(RngStream& rng, double p) {
    return uniform_unit(rng) < p;
}

// First k entries of a uniformly random permutation of `pool` (partial
// Fisher-Yates). The order of the result is part of the draw.
template <typename T>
std::vector<T> sample_prefix(std::vector<T> pool, std::size_t k, RngStream& rng) {
    if (k > pool.size()) {
        k = pool.size();
    }
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

} // namespace dmnai
