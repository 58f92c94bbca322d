#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace photocount {

enum class Regime { Absorbing, Amplifying };

std::string_view to_string(Regime regime);
Regime parse_regime(std::string_view text);

// Signed Bose-Einstein occupation f. Positive in an absorbing medium,
// f <= -1 in an amplifier (negative temperature); (-1, 0] is unphysical.
class OccupationFactor {
public:
    explicit OccupationFactor(double f);

    double value() const noexcept { return f_; }
    Regime regime() const noexcept { return f_ > 0 ? Regime::Absorbing : Regime::Amplifying; }

private:
    double f_;
};

// Detection window: N modes counted for a time t over a bandwidth
// delta_omega, giving nu = N t delta_omega / 2pi degrees of freedom.
class CountingWindow {
public:
    CountingWindow(int modes, double time, double bandwidth);

    // Window with a prescribed nu; the counting time is derived from it.
    static CountingWindow from_nu(int modes, double nu, double bandwidth = 1.0);

    int modes() const noexcept { return modes_; }
    double time() const noexcept { return time_; }
    double bandwidth() const noexcept { return bandwidth_; }
    double nu() const noexcept { return nu_; }
    double shape_per_mode() const noexcept { return nu_ / modes_; }

    // Frequency-resolved long-time counting needs t * delta_omega >> 2pi.
    bool long_time_valid(double factor = 20.0) const;

    // Optional coherence scales, used only for regime warnings.
    std::optional<double> correlation_frequency;  // omega_c
    std::optional<double> coherence_frequency;    // Omega_c

private:
    CountingWindow(int modes, double time, double bandwidth, double nu);

    int modes_;
    double time_;
    double bandwidth_;
    double nu_;
};

// Eigenvalues of S S^dagger, all on one side of 1.
class ScatteringStrengths {
public:
    static constexpr double kRegimeTolerance = 1e-9;

    // Validates every value against the requested regime (within tolerance).
    ScatteringStrengths(std::vector<double> sigma, Regime regime);

    // Infers the regime; a spectrum with values on both sides of 1 is
    // rejected. An all-lossless spectrum is classified as absorbing.
    static ScatteringStrengths classify(std::vector<double> sigma);

    std::span<const double> values() const noexcept { return sigma_; }
    Regime regime() const noexcept { return regime_; }
    std::size_t size() const noexcept { return sigma_.size(); }
    double operator[](std::size_t i) const { return sigma_[i]; }

private:
    std::vector<double> sigma_;
    Regime regime_;
};

// kappa_p for p = 1..order().
class FactorialCumulants {
public:
    explicit FactorialCumulants(std::vector<double> kappa);

    int order() const noexcept { return static_cast<int>(kappa_.size()); }
    double operator[](int p) const { return kappa_.at(static_cast<std::size_t>(p - 1)); }
    std::span<const double> values() const noexcept { return kappa_; }

private:
    std::vector<double> kappa_;
};

struct PhotocountPMF {
    static constexpr double kDefaultTruncationBound = 1e-10;

    std::vector<double> probs;    // P(0..n_max)
    double truncation_mass = 0.0; // mass beyond n_max
    double clip_mass = 0.0;       // negative round-off removed during inversion
    std::optional<std::string> warning;

    std::size_t n_max() const noexcept { return probs.empty() ? 0 : probs.size() - 1; }
    double mean() const;
    double variance() const;
    double cumulative(std::size_t n) const;
};

// Builds a PMF from probabilities whose exact total is one: the deficit is
// the truncation mass, and a warning is attached when it exceeds the bound.
PhotocountPMF make_pmf(std::vector<double> probs, double truncation_bound);

double total_variation(const PhotocountPMF& a, const PhotocountPMF& b);

}  // namespace photocount
