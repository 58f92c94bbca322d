#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "photocount/types.hpp"

namespace photocount {

enum class Quadrature { Trapezoid, Simpson };

// Scattering matrices S(omega) on a frequency grid, together with the
// occupation f(omega) at each grid point.
class SpectralScatteringData {
public:
    // f(omega) from the Bose-Einstein function at signed temperature T.
    static SpectralScatteringData from_temperature(std::vector<double> omega_grid,
                                                   std::vector<Eigen::MatrixXcd> matrices,
                                                   double temperature);

    // Prescribed occupation per grid point (e.g. a flat f across one bin).
    static SpectralScatteringData with_occupation(std::vector<double> omega_grid,
                                                  std::vector<Eigen::MatrixXcd> matrices,
                                                  std::vector<double> occupation);

    const std::vector<double>& omega_grid() const noexcept { return omega_; }
    const std::vector<Eigen::MatrixXcd>& matrices() const noexcept { return matrices_; }
    const std::vector<double>& occupation() const noexcept { return occupation_; }
    Regime regime() const noexcept { return regime_; }
    int modes() const { return static_cast<int>(matrices_.front().rows()); }

    // Quadrature weights of the grid under the given composite rule.
    std::vector<double> weights(Quadrature rule) const;

private:
    SpectralScatteringData(std::vector<double> omega, std::vector<Eigen::MatrixXcd> matrices,
                           std::vector<double> occupation);

    std::vector<double> omega_;
    std::vector<Eigen::MatrixXcd> matrices_;
    std::vector<double> occupation_;
    Regime regime_;
};

// F(xi) = -t int domega/2pi ln det[1 - (1 - S S^dagger) xi f].
double log_generating_long_time(const SpectralScatteringData& data, double xi, double t,
                                Quadrature rule = Quadrature::Trapezoid);

// F(xi) = -ln det[1 - xi t int domega/2pi (1 - S S^dagger) f].
double log_generating_short_time(const SpectralScatteringData& data, double xi, double t,
                                 Quadrature rule = Quadrature::Trapezoid);

using LogGeneratingFunction = std::function<std::complex<double>(std::complex<double>)>;

// Frequency-resolved long-time F for strengths constant over the counting
// bin: -(nu/N) sum_n ln(1 - mu_n xi). Accepts complex xi.
LogGeneratingFunction frequency_resolved_log_generating(const ScatteringStrengths& strengths,
                                                        const CountingWindow& window,
                                                        OccupationFactor f);

// Halfway between z = 1 and the nearest PGF singularity z = 1 + 1/max(mu).
double default_inversion_radius(const ScatteringStrengths& strengths, OccupationFactor f);

struct InversionOptions {
    std::size_t min_points = 256;
    std::size_t max_points = std::size_t{1} << 22;
    double tail_tolerance = 1e-13;  // relative size allowed in the upper half of the spectrum
    double truncation_bound = PhotocountPMF::kDefaultTruncationBound;
};

// P(n) as Fourier coefficients of exp F(z - 1) on the circle |z| = radius.
PhotocountPMF pmf_from_log_generating(const LogGeneratingFunction& log_generating,
                                      std::size_t n_max, double radius,
                                      const InversionOptions& options = {});

}  // namespace photocount
