#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace bivcomp::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

/// log(1 + e^x) without overflow.
inline double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

/// log(1 - e^a) for a <= 0 (Maechler's split at -ln 2).
inline double log1mexp(double a) {
    if (a > -0.6931471805599453) return std::log(-std::expm1(a));
    return std::log1p(-std::exp(a));
}

/// log(e^a + e^b)
inline double logaddexp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp(-std::fabs(a - b)));
}

/// Uniform draw strictly inside (0,1) from the top 53 bits of a 64-bit engine.
/// Portable across standard libraries, unlike std::uniform_real_distribution.
template <class Engine>
double open_uniform(Engine& rng) {
    const std::uint64_t bits = static_cast<std::uint64_t>(rng()) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

template <class Engine>
double unit_exponential(Engine& rng) {
    return -std::log(open_uniform(rng));
}

}  // namespace bivcomp::detail
