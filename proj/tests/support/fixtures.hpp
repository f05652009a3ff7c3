#pragma once

#include <bivcomp/composite.hpp>
#include <bivcomp/copula.hpp>

#include <cmath>
#include <random>
#include <vector>

namespace fixtures {

using namespace bivcomp;

inline double uniform(std::mt19937_64& g, double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }
inline double log_uniform(std::mt19937_64& g, double a, double b) { return std::exp(uniform(g, std::log(a), std::log(b))); }

/// Random valid composite parameters with head and tail scales within a factor
/// e^1.5 of the threshold, so both segments carry mass.
inline CompositeParams random_params(HeadFamily family, std::mt19937_64& g) {
    const double theta = log_uniform(g, 500.0, 20000.0);
    const double head_scale = theta * std::exp(uniform(g, -1.5, 1.5));
    const InverseWeibullParams tail{uniform(g, 0.5, 3.0), theta * std::exp(uniform(g, -1.5, 1.5))};
    switch (family) {
        case HeadFamily::weibull: return {WeibullParams{uniform(g, 0.5, 3.0), head_scale}, tail, theta};
        case HeadFamily::paralogistic: return {ParalogisticParams{uniform(g, 0.5, 3.0), 1.0 / head_scale}, tail, theta};
        case HeadFamily::inverse_burr:
            return {InverseBurrParams{uniform(g, 0.3, 3.0), uniform(g, 0.5, 4.0), 1.0 / head_scale}, tail, theta};
    }
    return {};
}

/// Ground truths for parameter-recovery checks, calibrated so every parameter
/// is identified at n = 5000 (threshold near the median, tail scale twice the
/// threshold, Inverse Burr away from its Inverse Weibull limit).
inline CompositeParams recovery_truth(HeadFamily family) {
    const InverseWeibullParams tail{1.5, 8000.0};
    switch (family) {
        case HeadFamily::weibull: return {WeibullParams{1.5, 2000.0}, tail, 4000.0};
        case HeadFamily::paralogistic: return {ParalogisticParams{2.0, 1.0 / 2500.0}, {1.5, 6000.0}, 4000.0};
        case HeadFamily::inverse_burr: return {InverseBurrParams{0.5, 4.0, 5e-4}, tail, 4000.0};
    }
    return {};
}

/// Same model in currency units divided by `factor`.
inline CompositeParams rescaled(const CompositeParams& p, double factor) {
    CompositeParams q = p;
    std::visit(
        [&](auto& h) {
            using T = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<T, WeibullParams>) h.sigma /= factor;
            else if constexpr (std::is_same_v<T, ParalogisticParams>) h.sigma *= factor;
            else h.tau *= factor;
        },
        q.head);
    q.tail.gamma /= factor;
    q.theta /= factor;
    return q;
}

/// Named positive parameters of a composite, in a fixed order per family.
struct NamedValue {
    const char* name;
    double value;
};

inline std::vector<NamedValue> named_values(const CompositeParams& p) {
    std::vector<NamedValue> out;
    std::visit(
        [&](const auto& h) {
            out.push_back({"mu", h.mu});
            out.push_back({"sigma", h.sigma});
            if constexpr (std::is_same_v<std::decay_t<decltype(h)>, InverseBurrParams>) out.push_back({"tau", h.tau});
        },
        p.head);
    out.push_back({"alpha", p.tail.alpha});
    out.push_back({"gamma", p.tail.gamma});
    out.push_back({"theta", p.theta});
    return out;
}

}  // namespace fixtures
