#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace bivcomp::detail {

/// Sample quantile by linear interpolation between order statistics
/// (Hyndman-Fan type 7): h = (n-1)p, x[floor h] + frac(h) (x[floor h + 1] - x[floor h]).
/// `sorted` must be ascending and non-empty.
inline double linear_quantile(std::span<const double> sorted, double p) {
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace bivcomp::detail
