#include "photocount/sampling.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "photocount/counting.hpp"
#include "photocount/errors.hpp"
#include "photocount/random.hpp"

namespace photocount {

std::vector<std::int64_t> sample_counts(const ScatteringStrengths& strengths,
                                        const CountingWindow& window, OccupationFactor f,
                                        std::size_t n_samples, std::uint64_t seed,
                                        const SamplerOptions& options) {
    if (n_samples < 1) throw DomainError("sample_counts: n_samples must be >= 1");
    if (window.modes() != static_cast<int>(strengths.size()))
        throw DomainError("sample_counts: window mode count differs from strength count");
    if (options.chunk_size < 1) throw DomainError("sample_counts: chunk size must be positive");

    // Gamma variables with a common scale add their shapes.
    std::map<double, double> shape_by_mu;
    for (double mu : emission_weights(strengths, f))
        if (mu > 0.0) shape_by_mu[mu] += window.shape_per_mode();

    std::vector<std::int64_t> counts(n_samples, 0);
    if (shape_by_mu.empty()) return counts;

    for_each_chunk(n_samples, options.chunk_size, options.workers,
                   [&](std::uint64_t begin, std::uint64_t end, std::uint64_t chunk) {
                       Engine rng = substream(seed, chunk);
                       std::vector<std::gamma_distribution<double>> gammas;
                       for (const auto& [mu, shape] : shape_by_mu) gammas.emplace_back(shape, mu);
                       for (std::uint64_t i = begin; i < end; ++i) {
                           double intensity = 0.0;
                           for (auto& g : gammas) intensity += g(rng);
                           counts[i] = intensity > 0.0
                                           ? std::poisson_distribution<std::int64_t>(intensity)(rng)
                                           : 0;
                       }
                   });
    return counts;
}

}  // namespace photocount
