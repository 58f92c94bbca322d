#pragma once

#include <cstdint>
#include <random>

namespace photocount {

using Engine = std::mt19937_64;

// Seed used when the caller supplies none; runs are reproducible by default.
inline constexpr std::uint64_t kDefaultSeed = 20260101;

// Independent generator for substream `stream` of a seeded computation.
// Work is always partitioned by stream index, never by worker, so results
// do not depend on the degree of parallelism.
inline Engine substream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32), 0x70686f74u};
    return Engine(seq);
}

// Runs body(begin, end, chunk_index) over [0, count) split into fixed-size
// chunks, spread across `workers` threads (0 = hardware concurrency).
template <typename Body>
void for_each_chunk(std::uint64_t count, std::uint64_t chunk, unsigned workers, Body&& body);

}  // namespace photocount

#include "photocount/detail/parallel.hpp"
