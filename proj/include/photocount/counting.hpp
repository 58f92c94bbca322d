#pragma once

#include <cstddef>
#include <vector>

#include "photocount/types.hpp"

namespace photocount {

// f = 1 / (exp(omega / T) - 1) in units hbar = k_B = 1. Negative T models
// a population-inverted amplifier; T -> 0^- gives f -> -1.
OccupationFactor bose_einstein(double omega, double temperature);

// ln of the negative-binomial weight with PGF [1 - mu (z - 1)]^{-shape},
// i.e. Gamma(n + shape) / (Gamma(shape) n!) * mu^n / (1 + mu)^(n + shape).
double negative_binomial_log_pmf(std::size_t n, double shape, double mu);

// Thermal black-body counts: negative binomial with nu degrees of freedom.
PhotocountPMF black_body_pmf(const CountingWindow& window, OccupationFactor f, std::size_t n_max,
                             double truncation_bound = PhotocountPMF::kDefaultTruncationBound);

// Per-mode emission weights mu_n = (1 - sigma_n) f, nonnegative in both
// regimes. Throws RegimeError when the sign class of f does not match.
std::vector<double> emission_weights(const ScatteringStrengths& strengths, OccupationFactor f);

FactorialCumulants factorial_cumulants(const ScatteringStrengths& strengths,
                                       const CountingWindow& window, OccupationFactor f,
                                       int p_max);

struct Moments {
    double mean;
    double variance;
};

Moments mean_variance(const FactorialCumulants& kappa);

// [sum (1 - sigma)]^2 / (N sum (1 - sigma)^2), in (0, 1].
double nu_eff_ratio(const ScatteringStrengths& strengths);
double nu_eff(const ScatteringStrengths& strengths, const CountingWindow& window);

enum class ConvolutionMethod { Auto, Direct, Transform };

struct ConvolutionOptions {
    ConvolutionMethod method = ConvolutionMethod::Auto;
    std::size_t direct_limit = 64;  // Auto uses direct convolution up to this many factors
    double mode_tail = 1e-14;       // per-mode truncation of the negative-binomial tail
    double truncation_bound = PhotocountPMF::kDefaultTruncationBound;
};

// Photocount distribution for frequency-resolved long-time counting:
// the product over modes of negative binomials with shape nu/N and
// weight mu_n, convolved on 0..n_max.
PhotocountPMF pmf_from_strengths(const ScatteringStrengths& strengths,
                                 const CountingWindow& window, OccupationFactor f,
                                 std::size_t n_max, const ConvolutionOptions& options = {});

}  // namespace photocount
