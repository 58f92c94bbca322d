#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "photocount/types.hpp"

namespace photocount {

struct SamplerOptions {
    unsigned workers = 0;            // 0 = hardware concurrency
    std::uint64_t chunk_size = 4096; // samples per random substream
};

// Monte Carlo photocounts with the same law as pmf_from_strengths: each
// mode contributes Poisson(lambda_n) with lambda_n ~ Gamma(nu/N, mu_n).
// Deterministic for a given (seed, n_samples) regardless of workers.
std::vector<std::int64_t> sample_counts(const ScatteringStrengths& strengths,
                                        const CountingWindow& window, OccupationFactor f,
                                        std::size_t n_samples, std::uint64_t seed,
                                        const SamplerOptions& options = {});

}  // namespace photocount
