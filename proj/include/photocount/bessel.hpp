#pragma once

#include <cstddef>
#include <vector>

namespace photocount {

// ln K_{n - 1/2}(x) for n = 0..count-1, x > 0.
//
// Starts from K_{-1/2}(x) = K_{1/2}(x) = sqrt(pi / 2x) e^{-x} and runs the
// upward recurrence K_{v+1} = K_{v-1} + (2v / x) K_v on successive ratios,
// so no intermediate value can overflow.
std::vector<double> log_bessel_k_half_integer(std::size_t count, double x);

}  // namespace photocount
