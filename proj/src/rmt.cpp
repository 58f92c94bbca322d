#include "photocount/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "photocount/errors.hpp"
#include "photocount/random.hpp"

namespace photocount {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinReciprocalCondition = 1e-14;
constexpr int kMaxResamples = 100;

// GUE with semicircle radius 2 lambda, lambda = M / pi, so the mean level
// spacing at the band centre is pi lambda / M = 1.
Eigen::MatrixXcd sample_gue(int m, Engine& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double lambda = m / kPi;
    const double scale = lambda / std::sqrt(static_cast<double>(m));
    Eigen::MatrixXcd h(m, m);
    for (int j = 0; j < m; ++j) {
        h(j, j) = scale * normal(rng);
        for (int i = j + 1; i < m; ++i) {
            const double re = normal(rng), im = normal(rng);
            h(i, j) = std::complex<double>(re, im) * (scale / std::numbers::sqrt2);
            h(j, i) = std::conj(h(i, j));
        }
    }
    return h;
}

}  // namespace

void EnsembleConfig::validate() const {
    if (channels < 1) throw DomainError("ensemble needs N >= 1 channels");
    if (levels < min_level_ratio * channels) {
        std::ostringstream msg;
        msg << "ensemble needs M >= " << min_level_ratio << " * N (got M = " << levels
            << ", N = " << channels << ")";
        throw DomainError(msg.str());
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("ensemble gamma must be positive");
    if (samples < 1) throw DomainError("ensemble needs at least one sample");
}

ScatteringDraw sample_smatrix(const EnsembleConfig& config, std::uint64_t index) {
    config.validate();
    const int m = config.levels, n = config.channels;
    Engine rng = substream(config.seed, index);

    // Ideal coupling: W^dagger W = (M / pi^2) 1_N on the first N levels.
    const double coupling = std::sqrt(static_cast<double>(m)) / kPi;
    const double absorption = config.gamma * n / (4.0 * kPi);  // 1 / (2 tau_a)

    for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
        Eigen::MatrixXcd a = -sample_gue(m, rng);
        for (int i = 0; i < m; ++i) a(i, i) += std::complex<double>(0.0, absorption);
        for (int c = 0; c < n; ++c) a(c, c) += std::complex<double>(0.0, kPi * coupling * coupling);

        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
        if (lu.rcond() < kMinReciprocalCondition) continue;
        Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(m, n);
        for (int c = 0; c < n; ++c) w(c, c) = coupling;
        const Eigen::MatrixXcd x = lu.solve(w);

        ScatteringDraw draw;
        draw.matrix = Eigen::MatrixXcd::Identity(n, n) -
                      std::complex<double>(0.0, 2.0 * kPi) * (w.adjoint() * x);
        draw.resamples = attempt;
        return draw;
    }
    throw ConvergenceError("resolvent stayed near-singular after repeated resampling");
}

ScatteringStrengths strengths_of(const Eigen::MatrixXcd& s) {
    if (s.rows() != s.cols() || s.rows() == 0)
        throw DomainError("strengths_of: scattering matrix must be square and non-empty");
    const Eigen::MatrixXcd product = s * s.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(product, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ConvergenceError("eigenvalues of S S^dagger failed");
    std::vector<double> sigma(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + solver.eigenvalues().size());
    for (double& v : sigma)
        if (v < 0.0 && v >= -ScatteringStrengths::kRegimeTolerance) v = 0.0;
    std::sort(sigma.begin(), sigma.end());
    return ScatteringStrengths::classify(std::move(sigma));
}

ScatteringStrengths EnsembleSpectra::pooled() const {
    if (samples.empty()) throw DomainError("empty ensemble");
    std::vector<double> all;
    for (const auto& s : samples) all.insert(all.end(), s.values().begin(), s.values().end());
    return ScatteringStrengths(std::move(all), samples.front().regime());
}

EnsembleSpectra sample_ensemble(const EnsembleConfig& config, unsigned workers) {
    config.validate();
    std::vector<std::optional<ScatteringStrengths>> slots(static_cast<std::size_t>(config.samples));
    std::vector<int> resamples(slots.size(), 0);
    for_each_chunk(slots.size(), 1, workers,
                   [&](std::uint64_t begin, std::uint64_t, std::uint64_t) {
                       auto draw = sample_smatrix(config, begin);
                       resamples[begin] = draw.resamples;
                       slots[begin] = strengths_of(draw.matrix);
                   });
    EnsembleSpectra spectra;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        spectra.samples.push_back(std::move(*slots[i]));
        spectra.resamples += resamples[i];
    }
    return spectra;
}

Histogram make_histogram(std::span<const double> values, std::size_t bins, double lower,
                         double upper) {
    if (bins < 1) throw DomainError("histogram needs at least one bin");
    if (!(upper > lower)) throw DomainError("histogram range must have upper > lower");
    Histogram h;
    h.lower = lower;
    h.upper = upper;
    h.total = values.size();
    std::vector<std::size_t> counts(bins, 0);
    const double width = (upper - lower) / static_cast<double>(bins);
    for (double v : values) {
        if (v < lower || v > upper) continue;
        const auto b = std::min(bins - 1, static_cast<std::size_t>((v - lower) / width));
        ++counts[b];
        ++h.count;
    }
    const double total = static_cast<double>(std::max<std::size_t>(1, h.total));
    h.density.resize(bins);
    h.std_error.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        const double c = static_cast<double>(counts[b]);
        h.density[b] = c / (total * width);
        h.std_error[b] = std::sqrt(c * (1.0 - c / total)) / (total * width);
    }
    return h;
}

Histogram empirical_density(const EnsembleSpectra& spectra, std::size_t bins) {
    const auto pooled = spectra.pooled();
    if (pooled.size() < 10 * bins)
        throw DomainError("empirical_density needs samples * N >= 10 * bins");
    // Round-off can place lossless channels a hair above 1.
    std::vector<double> values(pooled.values().begin(), pooled.values().end());
    for (double& v : values) v = std::clamp(v, 0.0, 1.0);
    return make_histogram(values, bins, 0.0, 1.0);
}

Histogram empirical_density(const EnsembleConfig& config, std::size_t bins, unsigned workers) {
    config.validate();
    if (static_cast<std::size_t>(config.samples) * static_cast<std::size_t>(config.channels) < 10 * bins)
        throw DomainError("empirical_density needs samples * N >= 10 * bins");
    return empirical_density(sample_ensemble(config, workers), bins);
}

double l1_distance(const Histogram& histogram, const StrengthDensity& density) {
    const double total = static_cast<double>(std::max<std::size_t>(1, histogram.total));
    double distance = 0.0;
    for (std::size_t b = 0; b < histogram.bins(); ++b) {
        const double empirical = histogram.density[b] * histogram.width();
        const double analytic = density.cdf(histogram.edge(b + 1)) - density.cdf(histogram.edge(b));
        distance += std::abs(empirical - analytic);
    }
    distance += static_cast<double>(histogram.total - histogram.count) / total;
    distance += density.cdf(histogram.lower) + (1.0 - density.cdf(histogram.upper));
    return distance;
}

}  // namespace photocount
