#pragma once

// Two-stage Inference Functions for Margins (IFM) estimation.
//
// Stage 1 maximizes each composite marginal log-likelihood separately with a
// restarted Nelder-Mead search. Stage 2 plugs the fitted marginal cdfs in as
// pseudo-observations and maximizes the Gumbel copula log-likelihood over phi.
//
// Unconstrained coordinates used by the marginal search:
//   every positive parameter  -> log
//   theta                     -> logit((theta - min y) / (max y - min y))
// so every simplex vertex is a valid model with theta inside the data range.

#include <bivcomp/composite.hpp>
#include <bivcomp/copula.hpp>
#include <bivcomp/detail/math.hpp>
#include <bivcomp/detail/order_stats.hpp>
#include <bivcomp/errors.hpp>
#include <bivcomp/kendall.hpp>
#include <bivcomp/nelder_mead.hpp>
#include <bivcomp/random.hpp>

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bivcomp {

struct OptimizerConfig {
    int max_iterations = 5000;
    double tolerance = 1e-8;
    int restarts = 3;
    double simplex_scale = 0.5;
    std::uint64_t seed = 1;
    /// Smallest sample accepted by fit_marginal.
    std::size_t min_observations = 20;
};

inline void validate(const OptimizerConfig& c) {
    if (!(c.tolerance > 0.0)) throw domain_error("optimizer: tolerance must be > 0");
    if (c.max_iterations < 1 || c.restarts < 1) throw domain_error("optimizer: iteration and restart counts must be >= 1");
    if (!(c.simplex_scale > 0.0)) throw domain_error("optimizer: simplex scale must be > 0");
}

/// Free marginal parameters: head params + alpha, gamma, theta.
inline int marginal_df(HeadFamily f) { return static_cast<int>(head_arity(f)) + 3; }

/// Marginal parameter count with theta left out, the convention of some published AIC/BIC tables:
/// head params + alpha, gamma (theta not counted).
inline int marginal_paper_df(HeadFamily f) { return static_cast<int>(head_arity(f)) + 2; }

inline double aic(double loglik, int df) { return -2.0 * loglik + 2.0 * df; }

inline double bic(double loglik, int df, double n) {
    if (!(n >= 1.0)) throw domain_error("bic: n must be >= 1");
    return -2.0 * loglik + std::log(n) * df;
}

/// Box for theta during the search.
struct ThresholdBox {
    double lo;
    double hi;
};

namespace detail {

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace detail

inline std::vector<double> encode_params(const CompositeParams& p, ThresholdBox box) {
    std::vector<double> z;
    std::visit(
        [&](const auto& h) {
            using T = std::decay_t<decltype(h)>;
            z.push_back(std::log(h.mu));
            z.push_back(std::log(h.sigma));
            if constexpr (std::is_same_v<T, InverseBurrParams>) z.push_back(std::log(h.tau));
        },
        p.head);
    z.push_back(std::log(p.tail.alpha));
    z.push_back(std::log(p.tail.gamma));
    const double frac = std::clamp((p.theta - box.lo) / (box.hi - box.lo), 1e-12, 1.0 - 1e-12);
    z.push_back(std::log(frac / (1.0 - frac)));
    return z;
}

inline CompositeParams decode_params(HeadFamily family, std::span<const double> z, ThresholdBox box) {
    std::size_t k = 0;
    auto next = [&] { return std::exp(z[k++]); };
    HeadParams head;
    switch (family) {
        case HeadFamily::weibull: {
            const double mu = next(), sigma = next();
            head = WeibullParams{mu, sigma};
            break;
        }
        case HeadFamily::paralogistic: {
            const double mu = next(), sigma = next();
            head = ParalogisticParams{mu, sigma};
            break;
        }
        case HeadFamily::inverse_burr: {
            const double mu = next(), sigma = next(), tau = next();
            head = InverseBurrParams{mu, sigma, tau};
            break;
        }
    }
    const double alpha = next(), gamma = next();
    const double theta = box.lo + (box.hi - box.lo) * detail::logistic(z[k]);
    return CompositeParams{head, InverseWeibullParams{alpha, gamma}, theta};
}

/// Heuristic starting point with the threshold at the given data quantile.
/// `sorted` must be ascending.
inline CompositeParams initial_params(HeadFamily family, std::span<const double> sorted, double theta_quantile) {
    const double theta = detail::linear_quantile(sorted, theta_quantile);
    const auto split = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), theta) - sorted.begin());
    const std::span<const double> below = sorted.first(std::max<std::size_t>(split, 1));
    const double head_median = std::max(detail::linear_quantile(below, 0.5), 1e-300);

    double hill = 0.0;
    std::size_t above = 0;
    for (std::size_t i = split; i < sorted.size(); ++i) {
        hill += std::log(sorted[i] / theta);
        ++above;
    }
    const double alpha = (above > 0 && hill > 0.0) ? std::clamp(static_cast<double>(above) / hill, 0.2, 10.0) : 1.0;

    HeadParams head;
    switch (family) {
        case HeadFamily::weibull:
            head = WeibullParams{1.0, head_median / std::log(2.0)};
            break;
        case HeadFamily::paralogistic: {
            const double mu = 1.5;
            head = ParalogisticParams{mu, std::pow(std::pow(2.0, 1.0 / mu) - 1.0, 1.0 / mu) / head_median};
            break;
        }
        case HeadFamily::inverse_burr: {
            const double mu = 1.0, sigma = 2.0;
            const double q = std::pow(0.5, 1.0 / mu);
            head = InverseBurrParams{mu, sigma, std::pow(q / (1.0 - q), 1.0 / sigma) / head_median};
            break;
        }
    }
    return CompositeParams{head, InverseWeibullParams{alpha, theta}, theta};
}

struct MarginalFit {
    CompositeParams params;
    double weight = 0.0;
    double log_likelihood = -std::numeric_limits<double>::infinity();
    int df = 0;
    int paper_df = 0;
    bool converged = false;
    int iterations = 0;
    /// Restart starting points, in restart order.
    std::vector<CompositeParams> starts;

    HeadFamily family() const { return params.family(); }
    CompositeModel model() const { return CompositeModel{params}; }
};

namespace detail {

inline double marginal_objective(HeadFamily family, std::span<const double> z, ThresholdBox box,
                                 std::span<const double> data) {
    try {
        const CompositeModel m{decode_params(family, z, box)};
        const double ll = m.log_likelihood(data);
        return std::isfinite(ll) ? -ll : kInf;
    } catch (const std::exception&) {
        return kInf;
    }
}

}  // namespace detail

/// Stage 1: maximum-likelihood fit of one composite marginal.
inline MarginalFit fit_marginal(std::span<const double> data, HeadFamily family, const OptimizerConfig& config = {}) {
    validate(config);
    if (data.size() < config.min_observations)
        throw input_error("marginal fit needs at least " + std::to_string(config.min_observations) +
                          " observations, got " + std::to_string(data.size()));
    for (double y : data)
        if (!(y > 0.0) || !std::isfinite(y)) throw domain_error("marginal fit: observations must be finite and > 0");

    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) throw degenerate_error("marginal fit: all observations are equal");
    const ThresholdBox box{sorted.front(), sorted.back()};

    static constexpr std::array<double, 3> kThresholdQuantiles{0.5, 0.7, 0.9};
    Rng rng = make_rng(config.seed);
    NelderMeadOptions nm;
    nm.max_iterations = config.max_iterations;
    nm.tolerance = config.tolerance;
    nm.initial_step = config.simplex_scale;

    MarginalFit best;
    best.df = marginal_df(family);
    best.paper_df = marginal_paper_df(family);
    bool have_best = false;
    for (int k = 0; k < config.restarts; ++k) {
        const double q = kThresholdQuantiles[static_cast<std::size_t>(k) % kThresholdQuantiles.size()];
        CompositeParams start = initial_params(family, sorted, q);
        std::vector<double> z = encode_params(start, box);
        if (k >= static_cast<int>(kThresholdQuantiles.size())) {
            // later restarts jitter every coordinate except theta
            for (std::size_t i = 0; i + 1 < z.size(); ++i) z[i] += 2.0 * detail::open_uniform(rng) - 1.0;
            start = decode_params(family, z, box);
        }
        best.starts.push_back(start);

        const auto res = nelder_mead(
            [&](const std::vector<double>& x) { return detail::marginal_objective(family, x, box, data); }, z, nm);
        best.iterations += res.iterations;
        best.converged = best.converged || res.converged;
        if (std::isfinite(res.value) && res.value < 1e299 && (!have_best || -res.value > best.log_likelihood)) {
            have_best = true;
            best.params = decode_params(family, res.x, box);
            best.log_likelihood = -res.value;
        }
    }
    if (!have_best) {
        best.converged = false;
        best.params = best.starts.front();
        best.log_likelihood = -std::numeric_limits<double>::infinity();
        return best;
    }
    best.weight = mixing_weight(best.params);
    // report the likelihood of the decoded parameters exactly as a re-evaluation would
    best.log_likelihood = CompositeModel{best.params}.log_likelihood(data);
    return best;
}

struct CopulaFit {
    double phi = 1.0;
    double log_likelihood = 0.0;
    /// Set when the maximum is at independence (phi = 1).
    bool at_boundary = false;
};

/// Stage 2: maximize sum log c(u_i, v_i; phi) over phi >= 1, searching eta = ln(phi - 1).
inline CopulaFit fit_copula(std::span<const UnitPair> pairs, const OptimizerConfig& config = {}) {
    validate(config);
    for (const auto& p : pairs)
        if (!(p.u > 0.0 && p.u < 1.0 && p.v > 0.0 && p.v < 1.0))
            throw domain_error("copula fit: pseudo-observations must lie in (0,1)");

    auto loglik = [&](double eta) {
        const double ll = copula_log_likelihood(GumbelParam{1.0 + std::exp(eta)}, pairs);
        return std::isfinite(ll) ? ll : -detail::kInf;
    };
    constexpr double kEtaLo = -14.0, kEtaHi = 4.6;  // phi in (1 + 8e-7, 100)
    constexpr int kGrid = 48;

    // coarse grid, then Brent inside the bracket around the best grid point
    int best_i = 0;
    double best_ll = -detail::kInf;
    for (int i = 0; i <= kGrid; ++i) {
        const double eta = kEtaLo + (kEtaHi - kEtaLo) * i / kGrid;
        const double ll = loglik(eta);
        if (ll > best_ll) {
            best_ll = ll;
            best_i = i;
        }
    }
    const double step = (kEtaHi - kEtaLo) / kGrid;
    const double lo = kEtaLo + step * std::max(best_i - 1, 0);
    const double hi = kEtaLo + step * std::min(best_i + 1, kGrid);
    std::uintmax_t max_iter = static_cast<std::uintmax_t>(config.max_iterations);
    const auto [eta, neg_ll] = boost::math::tools::brent_find_minima([&](double e) { return -loglik(e); }, lo, hi, 40,
                                                                     max_iter);

    CopulaFit fit;
    fit.phi = 1.0 + std::exp(eta);
    fit.log_likelihood = -neg_ll;
    // the copula log-likelihood is exactly 0 at independence
    if (!(fit.log_likelihood > 0.0)) {
        fit.phi = 1.0;
        fit.log_likelihood = 0.0;
        fit.at_boundary = true;
    }
    return fit;
}

struct FitReport {
    MarginalFit first;
    MarginalFit second;
    CopulaFit copula;
    double log_likelihood = 0.0;  // sum log f1 + sum log f2 + sum log c at the IFM estimates
    int df = 0;
    int paper_df = 0;
    double aic = 0.0;
    double bic = 0.0;
    double aic_paper_df = 0.0;
    double bic_paper_df = 0.0;
    double model_tau = 0.0;
    double empirical_tau = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    bool joint_refined = false;

    bool converged() const { return first.converged && second.converged; }
    BivariateModel model() const { return BivariateModel{first.model(), second.model(), GumbelParam{copula.phi}}; }
};

namespace detail {

inline std::vector<double> column(std::span<const ClaimPair> data, bool first) {
    std::vector<double> out;
    out.reserve(data.size());
    for (const auto& p : data) out.push_back(first ? p.first : p.second);
    return out;
}

inline std::vector<UnitPair> pseudo_observations(const CompositeModel& m1, const CompositeModel& m2,
                                                 std::span<const ClaimPair> data) {
    std::vector<UnitPair> uv;
    uv.reserve(data.size());
    for (const auto& p : data) uv.push_back({clamp_pseudo_obs(m1.cdf(p.first)), clamp_pseudo_obs(m2.cdf(p.second))});
    return uv;
}

inline void finish_report(FitReport& r, std::span<const ClaimPair> data) {
    const BivariateModel model = r.model();
    r.n = data.size();
    r.log_likelihood = model.log_likelihood(data);
    r.df = r.first.df + r.second.df + 1;
    r.paper_df = r.first.paper_df + r.second.paper_df + 1;
    const double n = static_cast<double>(r.n);
    r.aic = aic(r.log_likelihood, r.df);
    r.bic = bic(r.log_likelihood, r.df, n);
    r.aic_paper_df = aic(r.log_likelihood, r.paper_df);
    r.bic_paper_df = bic(r.log_likelihood, r.paper_df, n);
    r.model_tau = kendall_tau(GumbelParam{r.copula.phi});
    const auto x = column(data, true), y = column(data, false);
    r.empirical_tau = empirical_kendall_tau(x, y);
}

}  // namespace detail

/// Pseudo-observations (F1(y1), F2(y2)), clamped away from 0 and 1.
inline std::vector<UnitPair> pseudo_observations(const BivariateModel& model, std::span<const ClaimPair> data) {
    return detail::pseudo_observations(model.first(), model.second(), data);
}

/// Full IFM pipeline. The two marginal fits run concurrently; results do not
/// depend on scheduling.
inline FitReport fit_bivariate(std::span<const ClaimPair> data, HeadFamily first_family, HeadFamily second_family,
                               const OptimizerConfig& config = {}) {
    validate(config);
    for (const auto& p : data)
        if (!(p.first > 0.0 && p.second > 0.0)) throw domain_error("bivariate fit: both coordinates must be > 0");
    const auto x = detail::column(data, true), y = detail::column(data, false);

    auto run_stage = [&](const std::string& stage, const std::vector<double>& col, HeadFamily f) {
        try {
            return fit_marginal(col, f, config);
        } catch (const std::exception& e) {
            throw stage_error(stage, e.what());
        }
    };
    auto second_job =
        std::async(std::launch::async, [&] { return run_stage("marginal 2", y, second_family); });
    FitReport report;
    try {
        report.first = run_stage("marginal 1", x, first_family);
    } catch (...) {
        second_job.wait();
        throw;
    }
    report.second = second_job.get();
    if (!std::isfinite(report.first.log_likelihood)) throw stage_error("marginal 1", "no finite likelihood found");
    if (!std::isfinite(report.second.log_likelihood)) throw stage_error("marginal 2", "no finite likelihood found");

    try {
        const auto uv = detail::pseudo_observations(report.first.model(), report.second.model(), data);
        report.copula = fit_copula(uv, config);
        report.seed = config.seed;
        detail::finish_report(report, data);
    } catch (const stage_error&) {
        throw;
    } catch (const std::exception& e) {
        throw stage_error("copula", e.what());
    }
    return report;
}

/// Optional one-step joint maximum likelihood over all marginal and copula
/// parameters, started from an IFM report. Not part of the two-stage method.
inline FitReport refine_joint(std::span<const ClaimPair> data, const FitReport& ifm, const OptimizerConfig& config = {}) {
    validate(config);
    const auto x = detail::column(data, true), y = detail::column(data, false);
    const auto [x_lo, x_hi] = std::minmax_element(x.begin(), x.end());
    const auto [y_lo, y_hi] = std::minmax_element(y.begin(), y.end());
    const ThresholdBox box1{*x_lo, *x_hi}, box2{*y_lo, *y_hi};
    const HeadFamily f1 = ifm.first.family(), f2 = ifm.second.family();

    std::vector<double> z = encode_params(ifm.first.params, box1);
    const std::size_t split = z.size();
    const auto z2 = encode_params(ifm.second.params, box2);
    z.insert(z.end(), z2.begin(), z2.end());
    z.push_back(std::log(std::max(ifm.copula.phi - 1.0, 1e-6)));

    auto unpack = [&](std::span<const double> v) {
        return BivariateModel{CompositeModel{decode_params(f1, v.first(split), box1)},
                              CompositeModel{decode_params(f2, v.subspan(split, z2.size()), box2)},
                              GumbelParam{1.0 + std::exp(v.back())}};
    };
    NelderMeadOptions nm;
    nm.max_iterations = config.max_iterations;
    nm.tolerance = config.tolerance;
    nm.initial_step = 0.1 * config.simplex_scale;
    const auto res = nelder_mead(
        [&](const std::vector<double>& v) {
            try {
                const double ll = unpack(v).log_likelihood(data);
                return std::isfinite(ll) ? -ll : detail::kInf;
            } catch (const std::exception&) {
                return detail::kInf;
            }
        },
        z, nm);

    FitReport out = ifm;
    const double ifm_ll = ifm.model().log_likelihood(data);
    if (!(res.value < 1e299) || -res.value <= ifm_ll) return out;
    const BivariateModel m = unpack(res.x);
    out.first.params = m.first().params();
    out.first.weight = m.first().weight();
    out.first.log_likelihood = m.first().log_likelihood(x);
    out.second.params = m.second().params();
    out.second.weight = m.second().weight();
    out.second.log_likelihood = m.second().log_likelihood(y);
    out.copula.phi = m.phi().value();
    out.copula.log_likelihood = copula_log_likelihood(m.phi(), pseudo_observations(m, data));
    out.copula.at_boundary = false;
    out.joint_refined = true;
    detail::finish_report(out, data);
    return out;
}

}  // namespace bivcomp
