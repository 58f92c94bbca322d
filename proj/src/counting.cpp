#include "photocount/counting.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <sstream>
#include <utility>

#include <unsupported/Eigen/FFT>

#include "photocount/errors.hpp"

namespace photocount {

OccupationFactor bose_einstein(double omega, double temperature) {
    if (!(omega > 0.0)) throw DomainError("bose_einstein: omega must be positive");
    if (temperature == 0.0 || !std::isfinite(temperature))
        throw DomainError("bose_einstein: temperature must be finite and nonzero");
    const double f = 1.0 / std::expm1(omega / temperature);
    if (f == 0.0) throw DomainError("bose_einstein: occupation underflows to zero");
    return OccupationFactor(f);
}

double negative_binomial_log_pmf(std::size_t n, double shape, double mu) {
    if (mu == 0.0) return n == 0 ? 0.0 : -INFINITY;
    const double k = static_cast<double>(n);
    return std::lgamma(k + shape) - std::lgamma(shape) - std::lgamma(k + 1.0) + k * std::log(mu) -
           (k + shape) * std::log1p(mu);
}

PhotocountPMF black_body_pmf(const CountingWindow& window, OccupationFactor f, std::size_t n_max,
                             double truncation_bound) {
    if (f.regime() != Regime::Absorbing)
        throw DomainError("black_body_pmf: a black body is an absorber, f must be positive");
    std::vector<double> probs(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n)
        probs[n] = std::exp(negative_binomial_log_pmf(n, window.nu(), f.value()));
    return make_pmf(std::move(probs), truncation_bound);
}

std::vector<double> emission_weights(const ScatteringStrengths& strengths, OccupationFactor f) {
    const auto sigma = strengths.values();
    const bool lossless = std::all_of(sigma.begin(), sigma.end(), [](double s) {
        return std::abs(1.0 - s) <= ScatteringStrengths::kRegimeTolerance;
    });
    if (!lossless && strengths.regime() != f.regime()) {
        std::ostringstream msg;
        msg << to_string(strengths.regime()) << " scattering strengths require "
            << (strengths.regime() == Regime::Absorbing ? "f > 0" : "f <= -1") << ", got f = "
            << f.value();
        throw RegimeError(msg.str());
    }
    std::vector<double> mu(sigma.size());
    // Values within the regime tolerance on the wrong side of 1 are lossless.
    std::transform(sigma.begin(), sigma.end(), mu.begin(),
                   [&](double s) { return std::max(0.0, (1.0 - s) * f.value()); });
    return mu;
}

FactorialCumulants factorial_cumulants(const ScatteringStrengths& strengths,
                                       const CountingWindow& window, OccupationFactor f,
                                       int p_max) {
    if (p_max < 1) throw DomainError("factorial_cumulants: p_max must be >= 1");
    if (window.modes() != static_cast<int>(strengths.size()))
        throw DomainError("factorial_cumulants: window mode count differs from strength count");
    const auto mu = emission_weights(strengths, f);
    std::vector<double> kappa(static_cast<std::size_t>(p_max));
    double factorial = 1.0;  // (p - 1)!
    for (int p = 1; p <= p_max; ++p) {
        if (p > 1) factorial *= p - 1;
        double sum = 0.0;
        for (double m : mu) sum += std::pow(m, p);
        kappa[static_cast<std::size_t>(p - 1)] = factorial * window.shape_per_mode() * sum;
    }
    return FactorialCumulants(std::move(kappa));
}

Moments mean_variance(const FactorialCumulants& kappa) {
    if (kappa.order() < 2) throw DomainError("mean_variance: need kappa_1 and kappa_2");
    return {kappa[1], kappa[2] + kappa[1]};
}

double nu_eff_ratio(const ScatteringStrengths& strengths) {
    double sum = 0.0, sum_sq = 0.0;
    for (double s : strengths.values()) {
        sum += 1.0 - s;
        sum_sq += (1.0 - s) * (1.0 - s);
    }
    if (sum_sq == 0.0) throw DomainError("nu_eff undefined: all sigma = 1, nothing is emitted");
    return sum * sum / (static_cast<double>(strengths.size()) * sum_sq);
}

double nu_eff(const ScatteringStrengths& strengths, const CountingWindow& window) {
    return window.nu() * nu_eff_ratio(strengths);
}

namespace {

struct ModeFactor {
    double mu;
    double shape;
};

// Modes sharing the same weight merge into one negative binomial with the
// summed shape; zero-weight modes only contribute a point mass at 0.
std::vector<ModeFactor> group_modes(std::vector<double> mu, double shape) {
    std::sort(mu.begin(), mu.end());
    std::vector<ModeFactor> factors;
    for (double m : mu) {
        if (m == 0.0) continue;
        if (!factors.empty() && factors.back().mu == m)
            factors.back().shape += shape;
        else
            factors.push_back({m, shape});
    }
    return factors;
}

std::vector<double> mode_pmf(const ModeFactor& factor, std::size_t n_max, double tail) {
    std::vector<double> p;
    p.reserve(n_max + 1);
    const double log_q = std::log(factor.mu) - std::log1p(factor.mu);
    double log_p = -factor.shape * std::log1p(factor.mu);
    const double mode = std::max(0.0, (factor.shape - 1.0) * factor.mu);
    double cumulative = 0.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        const double value = std::exp(log_p);
        p.push_back(value);
        cumulative += value;
        if (static_cast<double>(n) > mode && 1.0 - cumulative < tail) break;
        const double k = static_cast<double>(n);
        log_p += std::log(k + factor.shape) - std::log(k + 1.0) + log_q;
    }
    return p;
}

std::vector<double> convolve_direct(const std::vector<double>& a, const std::vector<double>& b,
                                    std::size_t n_max) {
    const std::size_t len = std::min(n_max + 1, a.size() + b.size() - 1);
    std::vector<double> out(len, 0.0);
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        if (a[i] == 0.0) continue;
        const std::size_t jmax = std::min(b.size(), len - i);
        for (std::size_t j = 0; j < jmax; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

std::vector<double> convolve_fft(const std::vector<double>& a, const std::vector<double>& b,
                                 std::size_t n_max) {
    const std::size_t len = std::min(n_max + 1, a.size() + b.size() - 1);
    std::size_t size = 1;
    while (size < a.size() + b.size() - 1) size <<= 1;
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> fa(size), fb(size), ta, tb;
    std::copy(a.begin(), a.end(), fa.begin());
    std::copy(b.begin(), b.end(), fb.begin());
    fft.fwd(ta, fa);
    fft.fwd(tb, fb);
    for (std::size_t k = 0; k < size; ++k) ta[k] *= tb[k];
    fft.inv(fa, ta);
    std::vector<double> out(len);
    for (std::size_t k = 0; k < len; ++k) out[k] = std::max(0.0, fa[k].real());
    return out;
}

}  // namespace

PhotocountPMF pmf_from_strengths(const ScatteringStrengths& strengths,
                                 const CountingWindow& window, OccupationFactor f,
                                 std::size_t n_max, const ConvolutionOptions& options) {
    if (window.modes() != static_cast<int>(strengths.size()))
        throw DomainError("pmf_from_strengths: window mode count differs from strength count");
    const auto factors = group_modes(emission_weights(strengths, f), window.shape_per_mode());

    std::deque<std::vector<double>> parts;
    for (const auto& factor : factors) parts.push_back(mode_pmf(factor, n_max, options.mode_tail));
    if (parts.empty()) parts.push_back({1.0});

    const bool direct = options.method == ConvolutionMethod::Direct ||
                        (options.method == ConvolutionMethod::Auto &&
                         parts.size() <= options.direct_limit);
    if (direct) {
        std::vector<double> acc = std::move(parts.front());
        parts.pop_front();
        for (const auto& part : parts) acc = convolve_direct(acc, part, n_max);
        parts = {std::move(acc)};
    } else {
        // Pairwise tree reduction keeps every product short and avoids
        // wrap-around: each factor has degree <= n_max.
        while (parts.size() > 1) {
            auto a = std::move(parts.front());
            parts.pop_front();
            auto b = std::move(parts.front());
            parts.pop_front();
            parts.push_back(convolve_fft(a, b, n_max));
        }
    }
    std::vector<double> probs = std::move(parts.front());
    probs.resize(n_max + 1, 0.0);
    return make_pmf(std::move(probs), options.truncation_bound);
}

}  // namespace photocount
