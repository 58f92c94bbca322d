#include "photocount/bessel.hpp"

#include <cmath>
#include <numbers>

#include "photocount/errors.hpp"

namespace photocount {

std::vector<double> log_bessel_k_half_integer(std::size_t count, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("Bessel K argument must be positive");
    std::vector<double> out;
    out.reserve(count);
    if (count == 0) return out;

    double log_k = 0.5 * std::log(std::numbers::pi / (2.0 * x)) - x;  // order -1/2
    out.push_back(log_k);
    // ratio = K_{n-1/2} / K_{n-3/2}; for n = 1 it is 1 by symmetry in the order.
    double ratio = 1.0;
    for (std::size_t n = 1; n < count; ++n) {
        if (n > 1) ratio = 1.0 / ratio + (2.0 * static_cast<double>(n) - 3.0) / x;
        log_k += std::log(ratio);
        out.push_back(log_k);
    }
    return out;
}

}  // namespace photocount
