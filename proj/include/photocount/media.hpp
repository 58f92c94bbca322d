#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "photocount/errors.hpp"
#include "photocount/types.hpp"

namespace photocount {

// Semi-infinite disordered slab; gamma = (16/3) tau_s / tau_a. Absorbing only.
class SlabModel {
public:
    SlabModel(double gamma, int modes);

    double gamma() const noexcept { return gamma_; }
    int modes() const noexcept { return modes_; }
    double support_edge() const noexcept { return 1.0 / (1.0 + 0.25 * gamma_); }

    // The density holds for gamma N^2 >> 1.
    bool density_valid(double threshold = 10.0) const { return gamma_ * modes_ * modes_ >= threshold; }

private:
    double gamma_;
    int modes_;
};

// Chaotic cavity; gamma = tau_dwell / tau_a with tau_dwell = 2pi / (N delta).
class CavityModel {
public:
    // Throws ThresholdError for an amplifying cavity with gamma >= 1.
    CavityModel(double gamma, Regime regime, int modes);

    double gamma() const noexcept { return gamma_; }
    Regime regime() const noexcept { return regime_; }
    int modes() const noexcept { return modes_; }

    double sigma_minus() const noexcept { return 1.0 - 3.0 * gamma_ - 2.0 * std::numbers::sqrt2 * gamma_; }
    double sigma_plus() const noexcept { return 1.0 - 3.0 * gamma_ + 2.0 * std::numbers::sqrt2 * gamma_; }

    // The weak-absorption density is a gamma << 1 limit.
    bool weak_density_valid(double max_gamma = 0.1) const { return gamma_ <= max_gamma; }

private:
    double gamma_;
    Regime regime_;
    int modes_;
};

double rho_slab(double sigma, const SlabModel& model);
double rho_cavity_weak(double sigma, const CavityModel& model);

// Scattering-strength density rho(sigma) on [lower, upper] with known
// square-root endpoint behaviour. Integrals use a trigonometric change of
// variable that turns the endpoint factors into a smooth periodic
// integrand, so the midpoint rule converges spectrally.
class StrengthDensity {
public:
    enum class Endpoints {
        InverseSqrtLower,  // rho ~ (sigma - lower)^{-1/2}, ~ (upper - sigma)^{1/2}
        SqrtBoth,          // rho ~ (sigma - lower)^{1/2} (upper - sigma)^{1/2}
    };

    using Evaluator = std::function<double(double)>;

    StrengthDensity(Evaluator rho, double lower, double upper, double total, Endpoints endpoints);

    double operator()(double sigma) const;
    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    double total() const noexcept { return total_; }
    Endpoints endpoints() const noexcept { return endpoints_; }

    double theta_max() const noexcept;
    double sigma_at(double theta) const noexcept;
    double theta_at(double sigma) const noexcept;
    double jacobian(double theta) const noexcept;  // d sigma / d theta

    // int g(sigma) rho(sigma) d sigma for a smooth g (real or complex valued).
    template <typename G>
    auto integrate(G&& g, double rel_tol = 1e-13) const -> decltype(g(0.0));

    // Fraction of the mass below sigma, from a monotone table of >= 4096 knots.
    double cdf(double sigma) const;
    double quantile(double u) const;

    // |int rho - total| / total.
    double normalization_error() const;

private:
    void build_table();

    Evaluator rho_;
    double lower_, upper_, total_;
    Endpoints endpoints_;
    std::vector<double> theta_knots_;
    std::vector<double> cdf_knots_;
};

StrengthDensity slab_density(const SlabModel& model);
// Absorbing cavity, gamma << 1 form; requires sigma_- >= 0.
StrengthDensity cavity_weak_density(const CavityModel& model);
// Cavity density where an analytic form exists: the weak form for
// gamma <= 0.1, the slab form for gamma >= 10. Throws in the crossover.
StrengthDensity cavity_density(const CavityModel& model);

// int (1 - sigma)^p rho(sigma) d sigma.
double density_moment(const StrengthDensity& density, int p);

// Closed forms, as ratios nu_eff / nu or mean photocounts.
double nu_eff_slab(double gamma);
double mean_count_slab(double gamma, double nu, OccupationFactor f);
double nu_eff_cavity(double gamma, Regime regime);
double mean_count_cavity(double gamma, Regime regime, double nu, OccupationFactor f);

// Weak-absorption slab photocounts, P(n) proportional to
// (nbar^n / n!) (1 + f)^{-n/2} K_{n-1/2}(nu_eff sqrt(1 + f)) with
// nbar = nu_eff f / 2, normalized numerically. The tail beyond n_max is
// bounded geometrically with the asymptotic ratio f / (1 + f).
PhotocountPMF pn_slab_weak(double nu_eff, OccupationFactor f, std::size_t n_max,
                           double truncation_bound = PhotocountPMF::kDefaultTruncationBound);

// Absorbing <-> amplifying duality: sigma -> 1 / sigma, regime flipped.
ScatteringStrengths dual_strengths(const ScatteringStrengths& strengths);

enum class SamplingScheme {
    Independent,  // i.i.d. inverse-CDF draws
    Stratified,   // one draw per quantile stratum [k, k+1) / count
};

ScatteringStrengths sample_strengths_from_density(const StrengthDensity& density, std::size_t count,
                                                  std::uint64_t seed,
                                                  SamplingScheme scheme = SamplingScheme::Independent);

enum class Medium { Slab, Cavity };

struct MediumModel {
    Medium medium;
    double gamma;
    Regime regime;
};

enum class ThresholdStatus { Ok, AboveThreshold, NearThresholdWarning };

struct ThresholdOptions {
    double warning_gamma = 0.9;
    // Omega_c * tau_dwell; when set, the warning starts at 1 - product^{-1/2}.
    std::optional<double> coherence_dwell_product;
};

ThresholdStatus threshold_check(const MediumModel& model, const ThresholdOptions& options = {});

std::string_view to_string(ThresholdStatus status);
std::string_view to_string(Medium medium);

// ---------------------------------------------------------------------------

template <typename G>
auto StrengthDensity::integrate(G&& g, double rel_tol) const -> decltype(g(0.0)) {
    using Value = decltype(g(0.0));
    const double span = theta_max();
    Value previous{};
    for (std::size_t points = 64; points <= (std::size_t{1} << 22); points *= 2) {
        const double h = span / static_cast<double>(points);
        Value sum{};
        for (std::size_t i = 0; i < points; ++i) {
            const double theta = (static_cast<double>(i) + 0.5) * h;
            const double sigma = sigma_at(theta);
            sum += g(sigma) * (rho_(sigma) * jacobian(theta));
        }
        sum *= h;
        if (!std::isfinite(std::abs(sum)))
            throw ConvergenceError("density integral is not finite (non-integrable density?)");
        if (points > 64 && std::abs(sum - previous) <= rel_tol * std::abs(sum) + 1e-300)
            return sum;
        previous = sum;
    }
    throw ConvergenceError("density quadrature did not converge");
}

}  // namespace photocount
