#pragma once

// Spliced (composite) severity model: a head family right-truncated at the
// threshold theta and an Inverse Weibull tail left-truncated at theta,
//
//   f(y) = r * f_H(y) / F_H(theta)                  0 < y <= theta
//        = (1 - r) * f_IW(y) / (1 - F_IW(theta))    theta < y
//
// with the weight r fixed by requiring f to be continuous at theta:
//
//   r = f_IW(theta) F_H(theta) / (f_IW(theta) F_H(theta) + f_H(theta) (1 - F_IW(theta)))
//
// Smoothness (matching derivatives at theta) is not imposed; see
// CompositeModel::smoothness_gap() for a diagnostic.

#include <bivcomp/detail/math.hpp>
#include <bivcomp/distributions.hpp>
#include <bivcomp/errors.hpp>
#include <bivcomp/random.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

namespace bivcomp {

enum class HeadFamily { weibull, paralogistic, inverse_burr };

using HeadParams = std::variant<WeibullParams, ParalogisticParams, InverseBurrParams>;

/// Short tags used on the command line and in reports.
inline std::string_view family_tag(HeadFamily f) {
    switch (f) {
        case HeadFamily::weibull: return "wiw";
        case HeadFamily::paralogistic: return "pariw";
        case HeadFamily::inverse_burr: return "ibiw";
    }
    return "?";
}

inline std::string_view family_name(HeadFamily f) {
    switch (f) {
        case HeadFamily::weibull: return "Weibull-Inverse Weibull";
        case HeadFamily::paralogistic: return "Paralogistic-Inverse Weibull";
        case HeadFamily::inverse_burr: return "Inverse Burr-Inverse Weibull";
    }
    return "?";
}

inline std::optional<HeadFamily> parse_family(std::string_view tag) {
    if (tag == "wiw") return HeadFamily::weibull;
    if (tag == "pariw") return HeadFamily::paralogistic;
    if (tag == "ibiw") return HeadFamily::inverse_burr;
    return std::nullopt;
}

inline constexpr HeadFamily kAllFamilies[] = {HeadFamily::weibull, HeadFamily::paralogistic,
                                              HeadFamily::inverse_burr};

/// Number of head parameters (2 for Weibull and Paralogistic, 3 for Inverse Burr).
inline std::size_t head_arity(HeadFamily f) { return f == HeadFamily::inverse_burr ? 3 : 2; }

struct CompositeParams {
    HeadParams head;
    InverseWeibullParams tail;
    double theta;

    HeadFamily family() const { return static_cast<HeadFamily>(head.index()); }
};

inline void validate(const CompositeParams& p) {
    std::visit([](const auto& h) { validate(h); }, p.head);
    validate(p.tail);
    if (!detail::positive_finite(p.theta)) throw domain_error("composite: threshold theta must be finite and > 0");
}

/// log A and log B of r = A / (A + B).
struct SpliceTerms {
    double log_a;
    double log_b;
};

namespace detail {

inline double weight_from_terms(const SpliceTerms& t) {
    const bool a_dead = !(t.log_a > -kInf);
    const bool b_dead = !(t.log_b > -kInf);
    if (std::isnan(t.log_a) || std::isnan(t.log_b) || (a_dead && b_dead))
        throw degenerate_error("composite: both continuity terms vanish at theta; threshold lies outside both supports");
    return 1.0 / (1.0 + std::exp(t.log_b - t.log_a));
}

}  // namespace detail

/// Continuity terms from the generic kernels: A = f_IW(θ) F_H(θ), B = f_H(θ) (1 - F_IW(θ)).
inline SpliceTerms splice_terms(const CompositeParams& p) {
    validate(p);
    const double th = p.theta;
    return std::visit(
        [&](const auto& h) {
            return SpliceTerms{kernel::log_pdf(p.tail, th) + kernel::log_cdf(h, th),
                               kernel::log_pdf(h, th) + kernel::log_sf(p.tail, th)};
        },
        p.head);
}

/// Mixing weight r from the generic continuity condition.
inline double mixing_weight(const CompositeParams& p) { return detail::weight_from_terms(splice_terms(p)); }

/// Continuity terms written out per head family. Independent algebraic route to
/// splice_terms(); the two must agree.
inline SpliceTerms splice_terms_closed_form(const CompositeParams& p) {
    validate(p);
    const double th = p.theta;
    const double a = p.tail.alpha, g = p.tail.gamma;
    const double z = std::pow(g / th, a);
    const double log_tail_pdf = std::log(a / th) + a * std::log(g / th) - z;
    const double log_tail_sf = std::log(-std::expm1(-z));

    struct HeadAtTheta {
        double log_f;
        double log_F;
    };
    const HeadAtTheta head = std::visit(
        [&](const auto& h) -> HeadAtTheta {
            using T = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<T, WeibullParams>) {
                const double w = std::pow(th / h.sigma, h.mu);
                return {std::log(h.mu / h.sigma) - w + (h.mu - 1.0) * std::log(th / h.sigma), std::log(-std::expm1(-w))};
            } else if constexpr (std::is_same_v<T, ParalogisticParams>) {
                const double x = std::pow(h.sigma * th, h.mu);
                return {2.0 * std::log(h.mu) + h.mu * std::log(th * h.sigma) - std::log(th) - (h.mu + 1.0) * std::log1p(x),
                        std::log(-std::expm1(-h.mu * std::log1p(x)))};
            } else {
                const double x = std::pow(h.tau * th, h.sigma);
                return {std::log(h.mu * h.sigma) + h.mu * h.sigma * std::log(th * h.tau) - std::log(th) -
                            (h.mu + 1.0) * std::log1p(x),
                        -h.mu * std::log1p(x) + h.mu * h.sigma * std::log(h.tau * th)};
            }
        },
        p.head);

    return {log_tail_pdf + head.log_F, head.log_f + log_tail_sf};
}

inline double mixing_weight_closed_form(const CompositeParams& p) {
    return detail::weight_from_terms(splice_terms_closed_form(p));
}

/// Left and right derivatives of the density at theta.
struct SmoothnessGap {
    double left;
    double right;
};

/// Immutable composite distribution with the weight and truncation constants cached.
class CompositeModel {
public:
    explicit CompositeModel(CompositeParams params) : params_(std::move(params)) {
        const SpliceTerms t = splice_terms(params_);
        r_ = detail::weight_from_terms(t);
        log_r_ = -detail::softplus(t.log_b - t.log_a);
        log_1mr_ = -detail::softplus(t.log_a - t.log_b);
        std::visit([&](const auto& h) { log_head_mass_ = kernel::log_cdf(h, params_.theta); }, params_.head);
        log_tail_mass_ = kernel::log_sf(params_.tail, params_.theta);
    }

    const CompositeParams& params() const noexcept { return params_; }
    HeadFamily family() const noexcept { return params_.family(); }
    double theta() const noexcept { return params_.theta; }
    double weight() const noexcept { return r_; }
    /// log F_H(theta)
    double log_head_mass() const noexcept { return log_head_mass_; }
    /// log(1 - F_IW(theta))
    double log_tail_mass() const noexcept { return log_tail_mass_; }

    double log_pdf(double y) const {
        detail::require_support(y);
        return std::visit([&](const auto& h) { return log_pdf_unchecked(h, y); }, params_.head);
    }

    double pdf(double y) const { return std::exp(log_pdf(y)); }

    double cdf(double y) const {
        detail::require_support(y);
        if (y <= params_.theta)
            return std::visit([&](const auto& h) { return r_ * std::exp(kernel::log_cdf(h, y) - log_head_mass_); },
                              params_.head);
        return 1.0 - std::exp(log_1mr_ + kernel::log_sf(params_.tail, y) - log_tail_mass_);
    }

    double sf(double y) const {
        detail::require_support(y);
        if (y <= params_.theta) return 1.0 - cdf(y);
        return std::exp(log_1mr_ + kernel::log_sf(params_.tail, y) - log_tail_mass_);
    }

    double quantile(double u) const {
        detail::require_probability(u);
        if (u == r_) return params_.theta;
        if (u < r_) {
            const double target = std::exp(std::log(u) - log_r_ + log_head_mass_);
            return std::visit([&](const auto& h) { return kernel::quantile(h, target); }, params_.head);
        }
        const double s = std::exp(log_tail_mass_ + std::log1p(-u) - log_1mr_);
        return kernel::survival_quantile(params_.tail, s);
    }

    std::vector<double> sample(std::size_t n, Rng& rng) const {
        std::vector<double> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(quantile(detail::open_uniform(rng)));
        return out;
    }

    std::vector<double> sample(std::size_t n, std::uint64_t seed) const {
        Rng rng = make_rng(seed);
        return sample(n, rng);
    }

    /// Sum of log-densities. An observation equal to theta belongs to the head branch.
    double log_likelihood(std::span<const double> data) const {
        for (double y : data) detail::require_support(y);
        return std::visit(
            [&](const auto& h) {
                double sum = 0.0;
                for (double y : data) sum += log_pdf_unchecked(h, y);
                return sum;
            },
            params_.head);
    }

    SmoothnessGap smoothness_gap() const {
        const double th = params_.theta;
        const double h = 1e-6 * th;
        return std::visit(
            [&](const auto& head) {
                auto left = [&](double y) { return log_r_ + kernel::log_pdf(head, y) - log_head_mass_; };
                auto right = [&](double y) { return log_1mr_ + kernel::log_pdf(params_.tail, y) - log_tail_mass_; };
                const double f = std::exp(left(th));
                return SmoothnessGap{f * (left(th + h) - left(th - h)) / (2 * h),
                                     f * (right(th + h) - right(th - h)) / (2 * h)};
            },
            params_.head);
    }

private:
    template <class H>
    double log_pdf_unchecked(const H& head, double y) const {
        if (y <= params_.theta) return log_r_ + kernel::log_pdf(head, y) - log_head_mass_;
        return log_1mr_ + kernel::log_pdf(params_.tail, y) - log_tail_mass_;
    }

    CompositeParams params_;
    double r_ = 0.0;
    double log_r_ = 0.0;
    double log_1mr_ = 0.0;
    double log_head_mass_ = 0.0;
    double log_tail_mass_ = 0.0;
};

}  // namespace bivcomp
