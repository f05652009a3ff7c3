#pragma once

// Closed-form kernels for the four severity families used by the composite
// models: Weibull, Paralogistic and Inverse Burr (heads) and Inverse Weibull
// (tail).
//
// Scale conventions differ between families and follow the fitted-model
// parameterization, not the Klugman et al. one:
//   Weibull          F(y) = 1 - exp(-(y/sigma)^mu)                  sigma: scale
//   Paralogistic     F(y) = 1 - (1 + (sigma*y)^mu)^(-mu)            sigma: RATE (multiplies y)
//   Inverse Burr     F(y) = ((tau*y)^sigma / (1 + (tau*y)^sigma))^mu   tau: RATE (multiplies y)
//   Inverse Weibull  F(y) = exp(-(gamma/y)^alpha)                   gamma: scale
// A Paralogistic sigma of 8e-4 therefore corresponds to a scale of 1250.
//
// Every kernel is evaluated in log space; pdf()/cdf() exponentiate at the end.

#include <bivcomp/detail/math.hpp>
#include <bivcomp/errors.hpp>

#include <cmath>
#include <concepts>
#include <string>

namespace bivcomp {

struct WeibullParams {
    double mu;     // shape
    double sigma;  // scale
};

struct ParalogisticParams {
    double mu;     // shape
    double sigma;  // rate
};

struct InverseBurrParams {
    double mu;     // outer shape
    double sigma;  // inner shape
    double tau;    // rate
};

struct InverseWeibullParams {
    double alpha;  // shape
    double gamma;  // scale
};

namespace detail {

inline bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

inline void require_param(bool ok, const char* family, const char* what) {
    if (!ok) throw domain_error(std::string(family) + ": parameter " + what + " must be finite and > 0");
}

inline void require_support(double y) {
    if (!(y > 0.0) || std::isnan(y)) throw domain_error("severity argument must be > 0, got " + std::to_string(y));
}

inline void require_probability(double u) {
    if (!(u > 0.0 && u < 1.0)) throw domain_error("probability must lie in (0,1), got " + std::to_string(u));
}

}  // namespace detail

inline void validate(const WeibullParams& p) {
    detail::require_param(detail::positive_finite(p.mu), "Weibull", "mu");
    detail::require_param(detail::positive_finite(p.sigma), "Weibull", "sigma");
}
inline void validate(const ParalogisticParams& p) {
    detail::require_param(detail::positive_finite(p.mu), "Paralogistic", "mu");
    detail::require_param(detail::positive_finite(p.sigma), "Paralogistic", "sigma");
}
inline void validate(const InverseBurrParams& p) {
    detail::require_param(detail::positive_finite(p.mu), "InverseBurr", "mu");
    detail::require_param(detail::positive_finite(p.sigma), "InverseBurr", "sigma");
    detail::require_param(detail::positive_finite(p.tau), "InverseBurr", "tau");
}
inline void validate(const InverseWeibullParams& p) {
    detail::require_param(detail::positive_finite(p.alpha), "InverseWeibull", "alpha");
    detail::require_param(detail::positive_finite(p.gamma), "InverseWeibull", "gamma");
}

// ---------------------------------------------------------------------------
// Unchecked log-space kernels. Callers guarantee y > 0 and valid params.
// ---------------------------------------------------------------------------
namespace kernel {

// Weibull: z = (y/sigma)^mu
inline double log_pdf(const WeibullParams& p, double y) {
    const double ly = std::log(y / p.sigma);
    return std::log(p.mu) - std::log(p.sigma) + (p.mu - 1.0) * ly - std::exp(p.mu * ly);
}
inline double log_cdf(const WeibullParams& p, double y) {
    return detail::log1mexp(-std::exp(p.mu * std::log(y / p.sigma)));
}
inline double log_sf(const WeibullParams& p, double y) {
    return -std::exp(p.mu * std::log(y / p.sigma));
}

// Paralogistic: t = mu*log(sigma*y), S(y) = (1 + e^t)^(-mu)
inline double log_pdf(const ParalogisticParams& p, double y) {
    const double t = p.mu * std::log(p.sigma * y);
    return 2.0 * std::log(p.mu) + t - std::log(y) - (p.mu + 1.0) * detail::softplus(t);
}
inline double log_sf(const ParalogisticParams& p, double y) {
    return -p.mu * detail::softplus(p.mu * std::log(p.sigma * y));
}
inline double log_cdf(const ParalogisticParams& p, double y) {
    return detail::log1mexp(log_sf(p, y));
}

// Inverse Burr: t = sigma*log(tau*y), F(y) = (1 + e^-t)^(-mu)
inline double log_pdf(const InverseBurrParams& p, double y) {
    const double t = p.sigma * std::log(p.tau * y);
    return std::log(p.mu) + std::log(p.sigma) + p.mu * t - std::log(y) - (p.mu + 1.0) * detail::softplus(t);
}
inline double log_cdf(const InverseBurrParams& p, double y) {
    return -p.mu * detail::softplus(-p.sigma * std::log(p.tau * y));
}
inline double log_sf(const InverseBurrParams& p, double y) {
    return detail::log1mexp(log_cdf(p, y));
}

// Inverse Weibull: z = (gamma/y)^alpha
inline double log_pdf(const InverseWeibullParams& p, double y) {
    const double lz = p.alpha * std::log(p.gamma / y);
    return std::log(p.alpha) - std::log(y) + lz - std::exp(lz);
}
inline double log_cdf(const InverseWeibullParams& p, double y) {
    return -std::exp(p.alpha * std::log(p.gamma / y));
}
inline double log_sf(const InverseWeibullParams& p, double y) {
    return detail::log1mexp(log_cdf(p, y));
}

// Closed-form inverses.
inline double quantile(const WeibullParams& p, double u) {
    return p.sigma * std::pow(-std::log1p(-u), 1.0 / p.mu);
}
inline double quantile(const ParalogisticParams& p, double u) {
    const double x = std::expm1(-std::log1p(-u) / p.mu);  // (sigma*y)^mu
    return std::pow(x, 1.0 / p.mu) / p.sigma;
}
inline double quantile(const InverseBurrParams& p, double u) {
    const double c = -std::log(u) / p.mu;  // softplus(-t)
    const double t = -std::log(std::expm1(c));
    return std::exp(t / p.sigma) / p.tau;
}
inline double quantile(const InverseWeibullParams& p, double u) {
    return p.gamma * std::pow(-std::log(u), -1.0 / p.alpha);
}

/// Inverse Weibull quantile addressed by upper-tail probability s = 1 - u,
/// accurate when s is tiny.
inline double survival_quantile(const InverseWeibullParams& p, double s) {
    return p.gamma * std::pow(-std::log1p(-s), -1.0 / p.alpha);
}

}  // namespace kernel

template <class P>
concept SeverityParams = requires(const P& p, double y) {
    { kernel::log_pdf(p, y) } -> std::same_as<double>;
    { kernel::log_cdf(p, y) } -> std::same_as<double>;
    { kernel::log_sf(p, y) } -> std::same_as<double>;
    { kernel::quantile(p, y) } -> std::same_as<double>;
    validate(p);
};

// ---------------------------------------------------------------------------
// Checked public interface.
// ---------------------------------------------------------------------------

template <SeverityParams P>
double log_pdf(const P& p, double y) {
    validate(p);
    detail::require_support(y);
    return kernel::log_pdf(p, y);
}

template <SeverityParams P>
double pdf(const P& p, double y) {
    return std::exp(log_pdf(p, y));
}

template <SeverityParams P>
double log_cdf(const P& p, double y) {
    validate(p);
    detail::require_support(y);
    return kernel::log_cdf(p, y);
}

template <SeverityParams P>
double cdf(const P& p, double y) {
    return std::exp(log_cdf(p, y));
}

template <SeverityParams P>
double log_sf(const P& p, double y) {
    validate(p);
    detail::require_support(y);
    return kernel::log_sf(p, y);
}

template <SeverityParams P>
double quantile(const P& p, double u) {
    validate(p);
    detail::require_probability(u);
    return kernel::quantile(p, u);
}

}  // namespace bivcomp
