#include "photocount/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "photocount/errors.hpp"

namespace photocount {

std::string_view to_string(Regime regime) {
    return regime == Regime::Absorbing ? "absorbing" : "amplifying";
}

Regime parse_regime(std::string_view text) {
    if (text == "absorbing") return Regime::Absorbing;
    if (text == "amplifying") return Regime::Amplifying;
    throw DomainError("unknown regime '" + std::string(text) + "' (expected absorbing|amplifying)");
}

OccupationFactor::OccupationFactor(double f) : f_(f) {
    if (!std::isfinite(f)) throw DomainError("occupation factor must be finite");
    if (f <= 0.0 && f > -1.0) {
        std::ostringstream msg;
        msg << "occupation factor " << f << " lies in (-1, 0]";
        throw DomainError(msg.str());
    }
}

CountingWindow::CountingWindow(int modes, double time, double bandwidth)
    : CountingWindow(modes, time, bandwidth, modes * time * bandwidth / (2.0 * std::numbers::pi)) {}

CountingWindow::CountingWindow(int modes, double time, double bandwidth, double nu)
    : modes_(modes), time_(time), bandwidth_(bandwidth), nu_(nu) {
    if (modes < 1) throw DomainError("mode count N must be positive");
    if (!(time > 0.0) || !(bandwidth > 0.0) || !std::isfinite(time * bandwidth))
        throw DomainError("counting time and bandwidth must be positive");
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("nu must be positive");
}

CountingWindow CountingWindow::from_nu(int modes, double nu, double bandwidth) {
    if (modes < 1) throw DomainError("mode count N must be positive");
    if (!(bandwidth > 0.0)) throw DomainError("bandwidth must be positive");
    const double time = 2.0 * std::numbers::pi * nu / (modes * bandwidth);
    return CountingWindow(modes, time, bandwidth, nu);
}

bool CountingWindow::long_time_valid(double factor) const {
    return time_ * bandwidth_ >= factor * 2.0 * std::numbers::pi;
}

ScatteringStrengths::ScatteringStrengths(std::vector<double> sigma, Regime regime)
    : sigma_(std::move(sigma)), regime_(regime) {
    if (sigma_.empty()) throw DomainError("empty scattering-strength vector");
    for (std::size_t i = 0; i < sigma_.size(); ++i) {
        const double s = sigma_[i];
        const bool ok = std::isfinite(s) && s >= -kRegimeTolerance &&
                        (regime == Regime::Absorbing ? s <= 1.0 + kRegimeTolerance
                                                     : s >= 1.0 - kRegimeTolerance);
        if (!ok) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "sigma[" << i << "] = " << s << " violates the " << to_string(regime)
                << " regime";
            throw RegimeError(msg.str());
        }
    }
}

ScatteringStrengths ScatteringStrengths::classify(std::vector<double> sigma) {
    const bool below = std::any_of(sigma.begin(), sigma.end(),
                                   [](double s) { return s < 1.0 - kRegimeTolerance; });
    const bool above = std::any_of(sigma.begin(), sigma.end(),
                                   [](double s) { return s > 1.0 + kRegimeTolerance; });
    if (below && above)
        throw RegimeError("scattering strengths lie on both sides of 1 (mixed regime)");
    return ScatteringStrengths(std::move(sigma), above ? Regime::Amplifying : Regime::Absorbing);
}

FactorialCumulants::FactorialCumulants(std::vector<double> kappa) : kappa_(std::move(kappa)) {
    if (kappa_.empty()) throw DomainError("factorial cumulants need order >= 1");
}

double PhotocountPMF::mean() const {
    double m = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) m += static_cast<double>(n) * probs[n];
    return m;
}

double PhotocountPMF::variance() const {
    const double m = mean();
    double v = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) {
        const double d = static_cast<double>(n) - m;
        v += d * d * probs[n];
    }
    return v;
}

double PhotocountPMF::cumulative(std::size_t n) const {
    double c = 0.0;
    for (std::size_t k = 0; k <= n && k < probs.size(); ++k) c += probs[k];
    return c;
}

PhotocountPMF make_pmf(std::vector<double> probs, double truncation_bound) {
    PhotocountPMF pmf;
    double total = 0.0;
    for (double& p : probs) {
        if (!(p >= 0.0)) p = 0.0;
        total += p;
    }
    // Round-off can push the table total marginally above one.
    if (total > 1.0) {
        for (double& p : probs) p /= total;
        total = 1.0;
    }
    pmf.probs = std::move(probs);
    pmf.truncation_mass = 1.0 - total;
    if (pmf.truncation_mass > truncation_bound) {
        std::ostringstream msg;
        msg << "truncation mass " << pmf.truncation_mass << " beyond n_max = " << pmf.n_max()
            << " exceeds bound " << truncation_bound;
        pmf.warning = msg.str();
    }
    return pmf;
}

double total_variation(const PhotocountPMF& a, const PhotocountPMF& b) {
    const std::size_t n = std::max(a.probs.size(), b.probs.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double pa = k < a.probs.size() ? a.probs[k] : 0.0;
        const double pb = k < b.probs.size() ? b.probs[k] : 0.0;
        sum += std::abs(pa - pb);
    }
    return 0.5 * (sum + std::abs(a.truncation_mass - b.truncation_mass));
}

}  // namespace photocount
