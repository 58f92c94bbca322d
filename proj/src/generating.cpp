#include "photocount/generating.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "photocount/counting.hpp"
#include "photocount/errors.hpp"

namespace photocount {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string frequency_label(double omega) {
    std::ostringstream out;
    out.precision(17);
    out << "omega = " << omega;
    return out.str();
}

// log det of a Hermitian positive-definite matrix; throws when it is not.
double hermitian_log_det(const Eigen::MatrixXcd& a, const std::string& where) {
    const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
    Eigen::LLT<Eigen::MatrixXcd> llt(h);
    if (llt.info() != Eigen::Success)
        throw ConvergenceError("determinant argument not positive definite at " + where +
                               ": xi outside the convergence domain");
    double log_det = 0.0;
    const auto& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < l.rows(); ++i) log_det += 2.0 * std::log(l(i, i).real());
    return log_det;
}

}  // namespace

SpectralScatteringData::SpectralScatteringData(std::vector<double> omega,
                                               std::vector<Eigen::MatrixXcd> matrices,
                                               std::vector<double> occupation)
    : omega_(std::move(omega)), matrices_(std::move(matrices)), occupation_(std::move(occupation)) {
    if (omega_.size() < 2) throw DomainError("spectral data needs at least two grid points");
    if (matrices_.size() != omega_.size() || occupation_.size() != omega_.size())
        throw DomainError("spectral data: grid, matrices and occupation differ in length");
    for (std::size_t k = 1; k < omega_.size(); ++k)
        if (!(omega_[k] > omega_[k - 1])) throw DomainError("frequency grid must be strictly ascending");
    const auto n = matrices_.front().rows();
    if (n < 1) throw DomainError("scattering matrices must be non-empty");

    bool absorbing = false, amplifying = false;
    for (std::size_t k = 0; k < omega_.size(); ++k) {
        const auto& s = matrices_[k];
        if (s.rows() != n || s.cols() != n)
            throw DomainError("scattering matrices must be square and of equal dimension");
        const OccupationFactor f(occupation_[k]);
        const Eigen::VectorXd sv = s.jacobiSvd().singularValues();
        bool below = false, above = false;
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
            const double sigma = sv[i] * sv[i];
            below |= sigma < 1.0 - ScatteringStrengths::kRegimeTolerance;
            above |= sigma > 1.0 + ScatteringStrengths::kRegimeTolerance;
        }
        if (below && above)
            throw RegimeError("mixed regime in S S^dagger at " + frequency_label(omega_[k]));
        if ((below && f.regime() != Regime::Absorbing) || (above && f.regime() != Regime::Amplifying))
            throw RegimeError("occupation sign does not match the scattering regime at " +
                              frequency_label(omega_[k]));
        absorbing |= below;
        amplifying |= above;
    }
    if (absorbing && amplifying) throw RegimeError("mixed regimes across the frequency grid");
    regime_ = amplifying ? Regime::Amplifying
                         : (absorbing ? Regime::Absorbing : OccupationFactor(occupation_[0]).regime());
}

SpectralScatteringData SpectralScatteringData::from_temperature(
    std::vector<double> omega_grid, std::vector<Eigen::MatrixXcd> matrices, double temperature) {
    std::vector<double> occupation;
    occupation.reserve(omega_grid.size());
    for (double w : omega_grid) occupation.push_back(bose_einstein(w, temperature).value());
    return SpectralScatteringData(std::move(omega_grid), std::move(matrices), std::move(occupation));
}

SpectralScatteringData SpectralScatteringData::with_occupation(
    std::vector<double> omega_grid, std::vector<Eigen::MatrixXcd> matrices,
    std::vector<double> occupation) {
    return SpectralScatteringData(std::move(omega_grid), std::move(matrices), std::move(occupation));
}

std::vector<double> SpectralScatteringData::weights(Quadrature rule) const {
    const std::size_t n = omega_.size();
    std::vector<double> w(n, 0.0);
    if (rule == Quadrature::Trapezoid) {
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double h = omega_[k + 1] - omega_[k];
            w[k] += 0.5 * h;
            w[k + 1] += 0.5 * h;
        }
        return w;
    }
    // Composite Simpson over consecutive interval pairs, non-uniform spacing allowed.
    if ((n - 1) % 2 != 0)
        throw DomainError("Simpson quadrature needs an even number of grid intervals");
    for (std::size_t k = 0; k + 2 < n; k += 2) {
        const double h0 = omega_[k + 1] - omega_[k];
        const double h1 = omega_[k + 2] - omega_[k + 1];
        const double s = h0 + h1;
        w[k] += s / 6.0 * (2.0 - h1 / h0);
        w[k + 1] += s * s * s / (6.0 * h0 * h1);
        w[k + 2] += s / 6.0 * (2.0 - h0 / h1);
    }
    return w;
}

double log_generating_long_time(const SpectralScatteringData& data, double xi, double t,
                                Quadrature rule) {
    if (!(t > 0.0)) throw DomainError("counting time must be positive");
    const auto w = data.weights(rule);
    const auto n = data.modes();
    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(n, n);
    double integral = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        const auto& s = data.matrices()[k];
        const Eigen::MatrixXcd loss = identity - s * s.adjoint();
        const Eigen::MatrixXcd arg = identity - loss * (xi * data.occupation()[k]);
        integral += w[k] * hermitian_log_det(arg, frequency_label(data.omega_grid()[k]));
    }
    return -t * integral / kTwoPi;
}

double log_generating_short_time(const SpectralScatteringData& data, double xi, double t,
                                 Quadrature rule) {
    if (!(t > 0.0)) throw DomainError("counting time must be positive");
    const auto w = data.weights(rule);
    const auto n = data.modes();
    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t k = 0; k < w.size(); ++k) {
        const auto& s = data.matrices()[k];
        m += (w[k] * data.occupation()[k]) * (identity - s * s.adjoint());
    }
    m *= t / kTwoPi;
    return -hermitian_log_det(identity - xi * m, "the integrated short-time matrix");
}

LogGeneratingFunction frequency_resolved_log_generating(const ScatteringStrengths& strengths,
                                                        const CountingWindow& window,
                                                        OccupationFactor f) {
    if (window.modes() != static_cast<int>(strengths.size()))
        throw DomainError("window mode count differs from strength count");
    // With S S^dagger constant over the bin the determinant factorizes over
    // its eigenvalues, and t * delta_omega / 2pi = nu / N.
    std::vector<double> mu = emission_weights(strengths, f);
    std::sort(mu.begin(), mu.end());
    std::vector<std::pair<double, double>> factors;  // (mu, shape)
    for (double m : mu) {
        if (m == 0.0) continue;
        if (!factors.empty() && factors.back().first == m)
            factors.back().second += window.shape_per_mode();
        else
            factors.emplace_back(m, window.shape_per_mode());
    }
    return [factors = std::move(factors)](std::complex<double> xi) {
        std::complex<double> sum = 0.0;
        for (const auto& [m, shape] : factors) sum -= shape * std::log(1.0 - m * xi);
        return sum;
    };
}

double default_inversion_radius(const ScatteringStrengths& strengths, OccupationFactor f) {
    const auto mu = emission_weights(strengths, f);
    const double mu_max = mu.empty() ? 0.0 : *std::max_element(mu.begin(), mu.end());
    if (mu_max == 0.0) return 2.0;
    return 0.5 * (1.0 + 1.0 / mu_max) + 0.5;
}

PhotocountPMF pmf_from_log_generating(const LogGeneratingFunction& log_generating,
                                      std::size_t n_max, double radius,
                                      const InversionOptions& options) {
    if (!(radius > 1.0) || !std::isfinite(radius))
        throw DomainError("inversion radius must be finite and > 1");

    std::size_t points = options.min_points;
    while (points < 4 * (n_max + 1)) points <<= 1;

    Eigen::FFT<double> fft;
    double previous_tail = INFINITY;
    for (;;) {
        std::vector<std::complex<double>> log_values(points);
        double shift = -INFINITY;
        for (std::size_t j = 0; j < points; ++j) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / points;
            const std::complex<double> z = std::polar(radius, angle);
            log_values[j] = log_generating(z - 1.0);
            if (!std::isfinite(log_values[j].real()) || !std::isfinite(log_values[j].imag()))
                throw ConvergenceError("log generating function is not finite on |z| = radius");
            shift = std::max(shift, log_values[j].real());
        }
        // exp F is evaluated relative to its largest modulus to avoid overflow.
        std::vector<std::complex<double>> values(points), coeffs;
        for (std::size_t j = 0; j < points; ++j) values[j] = std::exp(log_values[j] - shift);
        fft.fwd(coeffs, values);

        double lower = 0.0, upper = 0.0;
        for (std::size_t k = 0; k < points; ++k) {
            double& bound = k < points / 2 ? lower : upper;
            bound = std::max(bound, std::abs(coeffs[k]));
        }
        const double tail = upper / lower;

        if (tail <= options.tail_tolerance) {
            const double log_radius = std::log(radius);
            std::vector<double> probs(n_max + 1);
            double clip = 0.0;
            for (std::size_t n = 0; n <= n_max; ++n) {
                const double scale = std::exp(shift - static_cast<double>(n) * log_radius) / points;
                const double p = coeffs[n].real() * scale;
                if (p < 0.0) clip -= p;
                probs[n] = std::max(0.0, p);
            }
            PhotocountPMF pmf = make_pmf(std::move(probs), options.truncation_bound);
            pmf.clip_mass = clip;
            if (clip > options.truncation_bound && !pmf.warning) {
                std::ostringstream msg;
                msg << "clipped negative round-off mass " << clip;
                pmf.warning = msg.str();
            }
            return pmf;
        }
        if (tail > 0.5 * previous_tail || 2 * points > options.max_points) {
            std::ostringstream msg;
            msg << "coefficient tail does not decay (relative size " << tail << " with " << points
                << " points): radius " << radius << " is outside the analyticity domain";
            throw ConvergenceError(msg.str());
        }
        previous_tail = tail;
        points <<= 1;
    }
}

}  // namespace photocount
