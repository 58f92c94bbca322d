#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "photocount/media.hpp"
#include "photocount/random.hpp"
#include "photocount/types.hpp"

namespace photocount {

// Resonance-model ensemble of an absorbing chaotic cavity: M internal
// levels from the Gaussian unitary ensemble, N ideally coupled channels.
struct EnsembleConfig {
    int levels = 400;       // M
    int channels = 20;      // N
    double gamma = 0.05;    // tau_dwell / tau_a
    int samples = 200;
    std::uint64_t seed = kDefaultSeed;
    double min_level_ratio = 10.0;  // M >= ratio * N

    void validate() const;
};

struct ScatteringDraw {
    Eigen::MatrixXcd matrix;
    int resamples = 0;  // draws rejected for a near-singular resolvent
};

// S = 1 - 2 pi i W^dagger (omega - H + i pi W W^dagger + i / 2tau_a)^{-1} W at
// omega = 0, with level spacing 1 at the band centre and 1/tau_a =
// gamma N / 2pi. Sample `index` uses its own random substream.
ScatteringDraw sample_smatrix(const EnsembleConfig& config, std::uint64_t index);

// Eigenvalues of S S^dagger, ascending, with the regime classified.
ScatteringStrengths strengths_of(const Eigen::MatrixXcd& s);

struct EnsembleSpectra {
    std::vector<ScatteringStrengths> samples;
    int resamples = 0;

    ScatteringStrengths pooled() const;
};

EnsembleSpectra sample_ensemble(const EnsembleConfig& config, unsigned workers = 0);

struct Histogram {
    double lower = 0.0;
    double upper = 1.0;
    std::size_t count = 0;         // values inside [lower, upper]
    std::size_t total = 0;         // all values
    std::vector<double> density;   // normalized by total and bin width
    std::vector<double> std_error;

    std::size_t bins() const noexcept { return density.size(); }
    double width() const noexcept { return (upper - lower) / static_cast<double>(bins()); }
    double edge(std::size_t i) const noexcept { return lower + width() * static_cast<double>(i); }
};

Histogram make_histogram(std::span<const double> values, std::size_t bins, double lower, double upper);

// Pooled sigma histogram over the ensemble, on [0, 1].
Histogram empirical_density(const EnsembleConfig& config, std::size_t bins, unsigned workers = 0);
Histogram empirical_density(const EnsembleSpectra& spectra, std::size_t bins);

// sum_bins | histogram mass - density mass / total |, plus analytic mass
// falling outside the histogram range.
double l1_distance(const Histogram& histogram, const StrengthDensity& density);

}  // namespace photocount
