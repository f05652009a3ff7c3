#pragma once

#include <bivcomp/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bivcomp {

/// Pair counts behind Kendall's tau-b.
struct ConcordanceCounts {
    std::int64_t total_pairs = 0;  // n(n-1)/2
    std::int64_t tied_x = 0;       // pairs tied in x (including joint ties)
    std::int64_t tied_y = 0;       // pairs tied in y (including joint ties)
    std::int64_t tied_xy = 0;      // pairs tied in both
    std::int64_t discordant = 0;

    /// concordant - discordant
    std::int64_t score() const { return total_pairs - tied_x - tied_y + tied_xy - 2 * discordant; }

    double tau_b() const {
        // one sqrt of the product keeps tau exactly +-1 for perfect agreement
        const long double denom = std::sqrt(static_cast<long double>(total_pairs - tied_x) *
                                            static_cast<long double>(total_pairs - tied_y));
        return static_cast<double>(static_cast<long double>(score()) / denom);
    }
};

namespace detail {

inline std::int64_t tied_pairs_in_runs(std::span<const double> sorted) {
    std::int64_t ties = 0, run = 1;
    for (std::size_t i = 1; i <= sorted.size(); ++i) {
        if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
            ++run;
        } else {
            ties += run * (run - 1) / 2;
            run = 1;
        }
    }
    return ties;
}

// Bottom-up merge sort counting strict inversions.
inline std::int64_t sort_counting_inversions(std::vector<double>& a) {
    const std::size_t n = a.size();
    std::vector<double> buf(n);
    std::int64_t swaps = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo < n; lo += 2 * width) {
            const std::size_t mid = std::min(lo + width, n), hi = std::min(lo + 2 * width, n);
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (a[j] < a[i]) {
                    swaps += static_cast<std::int64_t>(mid - i);
                    buf[k++] = a[j++];
                } else {
                    buf[k++] = a[i++];
                }
            }
            while (i < mid) buf[k++] = a[i++];
            while (j < hi) buf[k++] = a[j++];
        }
        a.swap(buf);
    }
    return swaps;
}

}  // namespace detail

/// Knight's O(n log n) algorithm.
inline ConcordanceCounts concordance_counts(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw domain_error("kendall tau: coordinate lengths differ");
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
    });

    ConcordanceCounts c;
    c.total_pairs = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - (n > 0)) / 2;

    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = x[order[i]];
        ys[i] = y[order[i]];
    }
    c.tied_x = detail::tied_pairs_in_runs(xs);

    std::int64_t run = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        if (i < n && xs[i] == xs[i - 1] && ys[i] == ys[i - 1]) {
            ++run;
        } else {
            c.tied_xy += run * (run - 1) / 2;
            run = 1;
        }
    }

    c.discordant = detail::sort_counting_inversions(ys);
    c.tied_y = detail::tied_pairs_in_runs(ys);
    return c;
}

/// Tie-adjusted Kendall's tau-b of paired data.
inline double empirical_kendall_tau(std::span<const double> x, std::span<const double> y) {
    if (x.size() < 2) throw domain_error("kendall tau: need at least 2 pairs");
    const auto c = concordance_counts(x, y);
    if (c.tied_x == c.total_pairs || c.tied_y == c.total_pairs)
        throw degenerate_error("kendall tau: a coordinate is constant");
    return c.tau_b();
}

}  // namespace bivcomp
