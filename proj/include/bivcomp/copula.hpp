#pragma once

// Gumbel-Hougaard copula
//
//   C(u,v) = exp(-((-ln u)^phi + (-ln v)^phi)^(1/phi)),   phi >= 1,
//
// its density, Kendall's tau (1 - 1/phi), and exact sampling through the
// Marshall-Olkin frailty construction with a positive stable mixing variable.

#include <bivcomp/composite.hpp>
#include <bivcomp/detail/math.hpp>
#include <bivcomp/errors.hpp>
#include <bivcomp/random.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bivcomp {

/// Gumbel dependence parameter; construction enforces phi >= 1.
class GumbelParam {
public:
    explicit GumbelParam(double phi) : phi_(phi) {
        if (!(std::isfinite(phi) && phi >= 1.0))
            throw domain_error("Gumbel copula: phi must be finite and >= 1, got " + std::to_string(phi));
    }
    double value() const noexcept { return phi_; }

private:
    double phi_;
};

struct UnitPair {
    double u;
    double v;
};

/// Bounds applied to pseudo-observations before any copula evaluation.
inline constexpr double kPseudoObsLo = 1e-10;
inline constexpr double kPseudoObsHi = 1.0 - 1e-10;

inline double clamp_pseudo_obs(double u) { return std::clamp(u, kPseudoObsLo, kPseudoObsHi); }

namespace detail {

inline void require_unit_open(double u, const char* name) {
    if (!(u > 0.0 && u < 1.0)) throw domain_error(std::string("copula argument ") + name + " must lie in (0,1)");
}

}  // namespace detail

inline double copula_cdf(GumbelParam phi, double u, double v) {
    detail::require_unit_open(u, "u");
    detail::require_unit_open(v, "v");
    const double p = phi.value();
    const double a = -std::log(u), b = -std::log(v);
    // s^(1/phi) via logs to keep (-ln u)^phi finite for large phi
    const double la = p * std::log(a), lb = p * std::log(b);
    const double ls = detail::logaddexp(la, lb);
    return std::exp(-std::exp(ls / p));
}

/// log c(u,v) with a = -ln u, b = -ln v, s = a^phi + b^phi:
///   log c = -s^(1/phi) + (phi-1)(ln a + ln b) + a + b + (1/phi - 2) ln s + ln(s^(1/phi) + phi - 1)
inline double copula_log_density(GumbelParam phi, double u, double v) {
    detail::require_unit_open(u, "u");
    detail::require_unit_open(v, "v");
    const double p = phi.value();
    const double a = -std::log(u), b = -std::log(v);
    const double la = std::log(a), lb = std::log(b);
    const double ls = detail::logaddexp(p * la, p * lb);
    const double s_root = std::exp(ls / p);
    return -s_root + (p - 1.0) * (la + lb) + a + b + (1.0 / p - 2.0) * ls + std::log(s_root + p - 1.0);
}

inline double copula_density(GumbelParam phi, double u, double v) { return std::exp(copula_log_density(phi, u, v)); }

inline double kendall_tau(GumbelParam phi) { return 1.0 - 1.0 / phi.value(); }

/// Inverse of kendall_tau on [0,1).
inline GumbelParam phi_from_tau(double tau) {
    if (!(tau >= 0.0 && tau < 1.0)) throw domain_error("Gumbel copula: Kendall's tau must lie in [0,1)");
    return GumbelParam{1.0 / (1.0 - tau)};
}

inline double copula_log_likelihood(GumbelParam phi, std::span<const UnitPair> pairs) {
    double sum = 0.0;
    for (const auto& p : pairs) sum += copula_log_density(phi, p.u, p.v);
    return sum;
}

/// Positive stable variate with Laplace transform exp(-t^alpha), 0 < alpha <= 1
/// (Chambers-Mallows-Stuck / Kanter representation).
template <class Engine>
double positive_stable(double alpha, Engine& rng) {
    if (alpha == 1.0) return 1.0;
    const double angle = detail::kPi * detail::open_uniform(rng);
    const double w = detail::unit_exponential(rng);
    const double lhs = std::log(std::sin(alpha * angle)) - std::log(std::sin(angle)) / alpha;
    const double rhs = (1.0 - alpha) / alpha * (std::log(std::sin((1.0 - alpha) * angle)) - std::log(w));
    return std::exp(lhs + rhs);
}

/// Draws n pairs from the copula. U_i = exp(-(E_i / S)^(1/phi)), S positive stable of index 1/phi.
inline std::vector<UnitPair> sample_copula(GumbelParam phi, std::size_t n, Rng& rng) {
    const double alpha = 1.0 / phi.value();
    std::vector<UnitPair> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = positive_stable(alpha, rng);
        const double e1 = detail::unit_exponential(rng);
        const double e2 = detail::unit_exponential(rng);
        // a uniform of exactly 0 or 1 is possible in floating point for extreme draws
        const double u = std::exp(-std::pow(e1 / s, alpha));
        const double v = std::exp(-std::pow(e2 / s, alpha));
        out.push_back({std::clamp(u, 0x1.0p-1074, std::nextafter(1.0, 0.0)),
                       std::clamp(v, 0x1.0p-1074, std::nextafter(1.0, 0.0))});
    }
    return out;
}

struct ClaimPair {
    double first;
    double second;
};

/// Two composite marginals joined by a Gumbel copula.
class BivariateModel {
public:
    BivariateModel(CompositeModel first, CompositeModel second, GumbelParam phi)
        : first_(std::move(first)), second_(std::move(second)), phi_(phi) {}

    const CompositeModel& first() const noexcept { return first_; }
    const CompositeModel& second() const noexcept { return second_; }
    GumbelParam phi() const noexcept { return phi_; }

    /// Joint cdf F(y1, y2) = C(F1(y1), F2(y2)).
    double cdf(double y1, double y2) const {
        return copula_cdf(phi_, clamp_pseudo_obs(first_.cdf(y1)), clamp_pseudo_obs(second_.cdf(y2)));
    }

    UnitPair pseudo_obs(const ClaimPair& y) const {
        return {clamp_pseudo_obs(first_.cdf(y.first)), clamp_pseudo_obs(second_.cdf(y.second))};
    }

    /// log f1 + log f2 + log c, summed over the sample.
    double log_likelihood(std::span<const ClaimPair> data) const {
        double sum = 0.0;
        for (const auto& y : data) {
            const UnitPair uv = pseudo_obs(y);
            sum += first_.log_pdf(y.first) + second_.log_pdf(y.second) + copula_log_density(phi_, uv.u, uv.v);
        }
        return sum;
    }

    std::vector<ClaimPair> sample_pairs(std::size_t n, Rng& rng) const {
        const auto uv = sample_copula(phi_, n, rng);
        std::vector<ClaimPair> out;
        out.reserve(n);
        for (const auto& p : uv) out.push_back({first_.quantile(p.u), second_.quantile(p.v)});
        return out;
    }

    std::vector<ClaimPair> sample_pairs(std::size_t n, std::uint64_t seed) const {
        Rng rng = make_rng(seed);
        return sample_pairs(n, rng);
    }

private:
    CompositeModel first_;
    CompositeModel second_;
    GumbelParam phi_;
};

}  // namespace bivcomp
