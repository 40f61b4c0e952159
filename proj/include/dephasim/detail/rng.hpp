// rng.hpp — seeded sampling helpers (hand-rolled transforms so that a fixed
// seed gives bit-identical streams regardless of the standard library)

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace dephasim::detail {

inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller; one normal per call, pairs drawn eagerly.
inline double standard_normal(std::mt19937_64& rng) {
    double u1 = 1.0 - uniform_unit(rng); // (0, 1]
    double u2 = uniform_unit(rng);
    double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

// Sample from the isotropic complex Gaussian with E[|z|^2] = variance.
inline std::complex<double> complex_gaussian(std::mt19937_64& rng, double variance) {
    double s = std::sqrt(variance / 2.0);
    double re = s * standard_normal(rng);
    double im = s * standard_normal(rng);
    return {re, im};
}

} // namespace dephasim::detail
