#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace bivcomp {

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
template <class Cdf>
double ks_statistic(std::span<const double> data, Cdf&& cdf) {
    std::vector<double> s(data.begin(), data.end());
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = cdf(s[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// n points geometrically spaced over [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t k = 0; k < n; ++k) g[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

}  // namespace bivcomp
