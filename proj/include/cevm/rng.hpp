#pragma once

// Deterministic, chunk-splittable random number generation.
//
// Sample streams are divided into fixed-size chunks. Each chunk owns an
// independent engine seeded from (stream seed, chunk index), so any worker
// can produce any chunk and the merged stream never depends on how chunks
// were assigned to workers.

#include <atomic>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace cevm::rng {

// Samples per chunk. Every sampler draws a fixed number of uniforms per
// sample, so chunk boundaries always fall between samples.
inline constexpr std::uint64_t kChunkSize = 1u << 16;

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Engine for one chunk of a seeded stream. mt19937_64 output is pinned by
// the standard, so streams are identical across platforms and runs.
inline std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk_index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ (chunk_index + 1)));
}

// Uniform draw on the open interval (0, 1). Explicit mapping instead of
// std::uniform_real_distribution, whose algorithm is implementation-defined.
// Never returns 0 or 1, so reciprocals and logs of draws stay finite.
inline double uniform01(std::mt19937_64& eng) {
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

inline std::uint64_t chunk_count(std::uint64_t n) {
    return (n + kChunkSize - 1) / kChunkSize;
}

// Runs fn(chunk_index) for every chunk in [0, n_chunks) across `workers`
// threads. fn must only touch per-chunk state; merge order is up to the
// caller (index order gives results independent of the worker count).
template <class Fn>
void run_chunks(std::uint64_t n_chunks, unsigned workers, Fn&& fn) {
    if (workers == 0) throw std::invalid_argument("run_chunks: workers must be >= 1");
    if (workers == 1 || n_chunks <= 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) fn(c);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto body = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            fn(c);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
}

}  // namespace cevm::rng
