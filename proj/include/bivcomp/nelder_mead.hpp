#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace bivcomp {

struct NelderMeadOptions {
    int max_iterations = 5000;
    /// Converged when max - min objective over the simplex falls below this.
    double tolerance = 1e-8;
    /// Initial simplex: x0 + step * e_i for each coordinate.
    double initial_step = 0.5;
    /// Rebuild the simplex around the best vertex after convergence, until a
    /// rebuild no longer improves the objective by more than `tolerance`.
    int max_rebuilds = 5;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

/// Minimizes f over R^n with the standard reflection/expansion/contraction/shrink
/// coefficients (1, 2, 1/2, 1/2). Non-finite objective values are treated as +huge.
template <class F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, const NelderMeadOptions& opt = {}) {
    constexpr double kHuge = 1e300;
    const std::size_t n = x0.size();
    NelderMeadResult res;
    auto eval = [&](const std::vector<double>& x) {
        ++res.evaluations;
        const double v = f(x);
        return std::isfinite(v) ? v : kHuge;
    };

    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    std::vector<std::size_t> idx(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);

    auto build = [&](const std::vector<double>& base, double step) {
        pts.assign(n + 1, base);
        for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
        for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);
    };
    auto along = [&](std::vector<double>& out, const std::vector<double>& worst, double coef) {
        for (std::size_t i = 0; i < n; ++i) out[i] = centroid[i] + coef * (worst[i] - centroid[i]);
    };

    build(x0, opt.initial_step);
    double prev_best = kHuge;
    int rebuilds = 0;

    while (res.iterations < opt.max_iterations) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = idx.front(), worst = idx.back(), second = idx[n - 1];

        if (vals[worst] - vals[best] <= opt.tolerance) {
            if (prev_best - vals[best] <= opt.tolerance || rebuilds >= opt.max_rebuilds) {
                res.converged = true;
                break;
            }
            prev_best = vals[best];
            ++rebuilds;
            const std::vector<double> anchor = pts[best];
            build(anchor, opt.initial_step * 0.1);
            continue;
        }
        ++res.iterations;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) centroid[i] += pts[idx[k]][i] / static_cast<double>(n);

        along(xr, pts[worst], -1.0);
        const double fr = eval(xr);
        if (fr < vals[best]) {
            along(xe, pts[worst], -2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = xr;
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr < vals[worst];
        along(xc, outside ? xr : pts[worst], 0.5);
        const double fc = eval(xc);
        if (fc < (outside ? fr : vals[worst])) {
            pts[worst] = xc;
            vals[worst] = fc;
            continue;
        }
        for (std::size_t k = 1; k <= n; ++k) {
            auto& p = pts[idx[k]];
            for (std::size_t i = 0; i < n; ++i) p[i] = pts[best][i] + 0.5 * (p[i] - pts[best][i]);
            vals[idx[k]] = eval(p);
        }
    }

    const auto it = std::min_element(vals.begin(), vals.end());
    res.x = pts[static_cast<std::size_t>(it - vals.begin())];
    res.value = *it;
    return res;
}

}  // namespace bivcomp
