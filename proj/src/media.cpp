#include "photocount/media.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "photocount/bessel.hpp"
#include "photocount/random.hpp"

namespace photocount {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kTableKnots = 8192;

void require_positive_gamma(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be positive and finite");
}

void require_modes(int modes) {
    if (modes < 1) throw DomainError("mode count N must be positive");
}

}  // namespace

SlabModel::SlabModel(double gamma, int modes) : gamma_(gamma), modes_(modes) {
    require_positive_gamma(gamma);
    require_modes(modes);
}

CavityModel::CavityModel(double gamma, Regime regime, int modes)
    : gamma_(gamma), regime_(regime), modes_(modes) {
    require_positive_gamma(gamma);
    require_modes(modes);
    if (regime == Regime::Amplifying && gamma >= 1.0) {
        std::ostringstream msg;
        msg << "amplifying cavity with gamma = " << gamma << " is above the laser threshold (gamma < 1)";
        throw ThresholdError(msg.str());
    }
}

double rho_slab(double sigma, const SlabModel& model) {
    if (!(sigma > 0.0) || !(sigma < model.support_edge())) return 0.0;
    const double g = model.gamma();
    // sigma^{-1} - 1 - gamma/4 written as (1 - sigma (1 + gamma/4)) / sigma
    const double inner = (1.0 - sigma * (1.0 + 0.25 * g)) / sigma;
    const double x = 1.0 - sigma;
    return model.modes() / kPi * std::sqrt(g) * std::sqrt(std::max(0.0, inner)) / (x * x);
}

double rho_cavity_weak(double sigma, const CavityModel& model) {
    if (model.regime() != Regime::Absorbing)
        throw RegimeError("rho_cavity_weak describes the absorbing cavity; use dual_strengths");
    const double lo = model.sigma_minus(), hi = model.sigma_plus();
    if (!(sigma > lo) || !(sigma < hi)) return 0.0;
    const double x = 1.0 - sigma;
    return model.modes() / (2.0 * kPi) * std::sqrt((sigma - lo) * (hi - sigma)) / (x * x);
}

StrengthDensity::StrengthDensity(Evaluator rho, double lower, double upper, double total,
                                 Endpoints endpoints)
    : rho_(std::move(rho)), lower_(lower), upper_(upper), total_(total), endpoints_(endpoints) {
    if (!(upper > lower)) throw DomainError("density support must have upper > lower");
    if (!(total > 0.0)) throw DomainError("density total must be positive");
    build_table();
}

double StrengthDensity::operator()(double sigma) const {
    if (!(sigma > lower_) || !(sigma < upper_)) return 0.0;
    return rho_(sigma);
}

double StrengthDensity::theta_max() const noexcept {
    return endpoints_ == Endpoints::InverseSqrtLower ? 0.5 * kPi : kPi;
}

double StrengthDensity::sigma_at(double theta) const noexcept {
    if (endpoints_ == Endpoints::InverseSqrtLower) {
        const double s = std::sin(theta);
        return lower_ + (upper_ - lower_) * s * s;
    }
    return 0.5 * (lower_ + upper_) - 0.5 * (upper_ - lower_) * std::cos(theta);
}

double StrengthDensity::theta_at(double sigma) const noexcept {
    const double t = std::clamp((sigma - lower_) / (upper_ - lower_), 0.0, 1.0);
    if (endpoints_ == Endpoints::InverseSqrtLower) return std::asin(std::sqrt(t));
    return std::acos(1.0 - 2.0 * t);
}

double StrengthDensity::jacobian(double theta) const noexcept {
    if (endpoints_ == Endpoints::InverseSqrtLower) return (upper_ - lower_) * std::sin(2.0 * theta);
    return 0.5 * (upper_ - lower_) * std::sin(theta);
}

void StrengthDensity::build_table() {
    // Five-point Gauss-Legendre on every knot interval of the smooth
    // theta-integrand.
    static constexpr std::array<double, 5> nodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                                    0.5384693101056831, 0.9061798459386640};
    static constexpr std::array<double, 5> weights = {0.2369268850561891, 0.4786286704993665,
                                                      0.5688888888888889, 0.4786286704993665,
                                                      0.2369268850561891};
    const double h = theta_max() / kTableKnots;
    theta_knots_.resize(kTableKnots + 1);
    cdf_knots_.resize(kTableKnots + 1);
    theta_knots_[0] = 0.0;
    cdf_knots_[0] = 0.0;
    for (std::size_t i = 0; i < kTableKnots; ++i) {
        const double a = i * h;
        double piece = 0.0;
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            const double theta = a + 0.5 * h * (1.0 + nodes[q]);
            piece += weights[q] * rho_(sigma_at(theta)) * jacobian(theta);
        }
        theta_knots_[i + 1] = a + h;
        cdf_knots_[i + 1] = cdf_knots_[i] + 0.5 * h * std::max(0.0, piece);
    }
    const double mass = cdf_knots_.back();
    if (!(mass > 0.0) || !std::isfinite(mass)) throw ConvergenceError("density has no finite mass");
    for (double& c : cdf_knots_) c /= mass;
}

double StrengthDensity::cdf(double sigma) const {
    if (sigma <= lower_) return 0.0;
    if (sigma >= upper_) return 1.0;
    const double theta = theta_at(sigma);
    const double pos = theta / theta_max() * kTableKnots;
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(pos), kTableKnots - 1);
    const double frac = pos - static_cast<double>(i);
    return cdf_knots_[i] + frac * (cdf_knots_[i + 1] - cdf_knots_[i]);
}

double StrengthDensity::quantile(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    auto it = std::upper_bound(cdf_knots_.begin(), cdf_knots_.end(), u);
    if (it == cdf_knots_.end()) return sigma_at(theta_max());
    const auto i = static_cast<std::size_t>(it - cdf_knots_.begin()) - 1;
    const double width = cdf_knots_[i + 1] - cdf_knots_[i];
    const double frac = width > 0.0 ? (u - cdf_knots_[i]) / width : 0.0;
    return sigma_at(theta_knots_[i] + frac * (theta_knots_[i + 1] - theta_knots_[i]));
}

double StrengthDensity::normalization_error() const {
    return std::abs(integrate([](double) { return 1.0; }) - total_) / total_;
}

StrengthDensity slab_density(const SlabModel& model) {
    return StrengthDensity([model](double s) { return rho_slab(s, model); }, 0.0, model.support_edge(),
                           model.modes(), StrengthDensity::Endpoints::InverseSqrtLower);
}

StrengthDensity cavity_weak_density(const CavityModel& model) {
    if (model.regime() != Regime::Absorbing)
        throw RegimeError("cavity density is defined for the absorbing cavity");
    if (model.sigma_minus() < 0.0)
        throw DomainError("weak-absorption cavity density needs sigma_- >= 0 (gamma too large)");
    return StrengthDensity([model](double s) { return rho_cavity_weak(s, model); },
                           model.sigma_minus(), model.sigma_plus(), model.modes(),
                           StrengthDensity::Endpoints::SqrtBoth);
}

StrengthDensity cavity_density(const CavityModel& model) {
    if (model.weak_density_valid()) return cavity_weak_density(model);
    if (model.gamma() >= 10.0) return slab_density(SlabModel(model.gamma(), model.modes()));
    std::ostringstream msg;
    msg << "no analytic cavity density for gamma = " << model.gamma()
        << " (only gamma <= 0.1 and gamma >= 10 are covered)";
    throw DomainError(msg.str());
}

double density_moment(const StrengthDensity& density, int p) {
    if (p < 0) throw DomainError("density_moment: p must be >= 0");
    return density.integrate([p](double s) { return std::pow(1.0 - s, p); });
}

double nu_eff_slab(double gamma) {
    require_positive_gamma(gamma);
    const double y = std::pow(1.0 + 4.0 / gamma, 0.25);
    const double s = y + 1.0 / y;
    return 4.0 / (s * s);
}

double mean_count_slab(double gamma, double nu, OccupationFactor f) {
    require_positive_gamma(gamma);
    if (f.regime() != Regime::Absorbing)
        throw RegimeError("the amplifying slab is above the laser threshold; f must be positive");
    // (1/2) nu f gamma (sqrt(1 + 4/gamma) - 1) without the cancellation at large gamma
    return 2.0 * nu * f.value() / (std::sqrt(1.0 + 4.0 / gamma) + 1.0);
}

double nu_eff_cavity(double gamma, Regime regime) {
    require_positive_gamma(gamma);
    const double g = regime == Regime::Absorbing ? gamma : -gamma;
    if (regime == Regime::Amplifying && gamma >= 1.0)
        throw ThresholdError("amplifying cavity requires gamma < 1 (laser threshold)");
    return (1.0 + g) * (1.0 + g) / (g * g + 2.0 * g + 2.0);
}

double mean_count_cavity(double gamma, Regime regime, double nu, OccupationFactor f) {
    require_positive_gamma(gamma);
    if (f.regime() != regime)
        throw RegimeError(std::string("occupation sign does not match the ") +
                          std::string(to_string(regime)) + " cavity");
    if (regime == Regime::Amplifying && gamma >= 1.0)
        throw ThresholdError("amplifying cavity requires gamma < 1 (laser threshold)");
    const double g = regime == Regime::Absorbing ? gamma : -gamma;
    return nu * f.value() * g / (1.0 + g);
}

PhotocountPMF pn_slab_weak(double nu_eff, OccupationFactor f, std::size_t n_max,
                           double truncation_bound) {
    if (!(nu_eff > 0.0) || !std::isfinite(nu_eff)) throw DomainError("pn_slab_weak: nu_eff must be positive");
    if (f.regime() != Regime::Absorbing) throw RegimeError("pn_slab_weak: f must be positive");

    const double fv = f.value();
    const double mean = 0.5 * nu_eff * fv;
    const double log_damping = 0.5 * std::log1p(fv);
    const auto log_k = log_bessel_k_half_integer(n_max + 1, nu_eff * std::sqrt(1.0 + fv));

    std::vector<double> log_w(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        const double k = static_cast<double>(n);
        log_w[n] = k * std::log(mean) - std::lgamma(k + 1.0) - k * log_damping + log_k[n];
    }
    const double peak = *std::max_element(log_w.begin(), log_w.end());
    std::vector<double> probs(n_max + 1);
    double sum = 0.0;
    for (std::size_t n = 0; n <= n_max; ++n) sum += probs[n] = std::exp(log_w[n] - peak);

    // Successive ratios rise towards f / (1 + f); bound the tail geometrically.
    double ratio = fv / (1.0 + fv);
    if (n_max >= 1) ratio = std::max(ratio, std::exp(log_w[n_max] - log_w[n_max - 1]));
    const double tail = ratio < 1.0 ? probs[n_max] * ratio / (1.0 - ratio) : INFINITY;

    PhotocountPMF pmf;
    const double norm = sum + tail;
    for (double& p : probs) p /= norm;
    pmf.probs = std::move(probs);
    pmf.truncation_mass = tail / norm;
    if (!(pmf.truncation_mass <= truncation_bound)) {
        std::ostringstream msg;
        msg << "estimated tail mass " << pmf.truncation_mass << " beyond n_max = " << n_max
            << " exceeds bound " << truncation_bound;
        pmf.warning = msg.str();
    }
    return pmf;
}

ScatteringStrengths dual_strengths(const ScatteringStrengths& strengths) {
    std::vector<double> dual;
    dual.reserve(strengths.size());
    for (double s : strengths.values()) {
        if (s == 0.0) throw DomainError("duality-singular: sigma = 0 has no reciprocal");
        dual.push_back(1.0 / s);
    }
    const Regime flipped =
        strengths.regime() == Regime::Absorbing ? Regime::Amplifying : Regime::Absorbing;
    return ScatteringStrengths(std::move(dual), flipped);
}

ScatteringStrengths sample_strengths_from_density(const StrengthDensity& density, std::size_t count,
                                                  std::uint64_t seed, SamplingScheme scheme) {
    if (count < 1) throw DomainError("sample_strengths_from_density: count must be >= 1");
    Engine rng = substream(seed, 0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<double> sigma(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double u = uniform(rng);
        sigma[k] = density.quantile(scheme == SamplingScheme::Independent
                                        ? u
                                        : (static_cast<double>(k) + u) / static_cast<double>(count));
    }
    return ScatteringStrengths::classify(std::move(sigma));
}

ThresholdStatus threshold_check(const MediumModel& model, const ThresholdOptions& options) {
    if (model.regime == Regime::Absorbing) return ThresholdStatus::Ok;
    if (model.medium == Medium::Slab) return ThresholdStatus::AboveThreshold;
    if (model.gamma >= 1.0) return ThresholdStatus::AboveThreshold;
    const double onset = options.coherence_dwell_product
                             ? 1.0 - 1.0 / std::sqrt(*options.coherence_dwell_product)
                             : options.warning_gamma;
    return model.gamma > onset ? ThresholdStatus::NearThresholdWarning : ThresholdStatus::Ok;
}

std::string_view to_string(ThresholdStatus status) {
    switch (status) {
        case ThresholdStatus::Ok: return "ok";
        case ThresholdStatus::AboveThreshold: return "above_threshold";
        case ThresholdStatus::NearThresholdWarning: return "near_threshold";
    }
    return "unknown";
}

std::string_view to_string(Medium medium) { return medium == Medium::Slab ? "slab" : "cavity"; }

}  // namespace photocount
