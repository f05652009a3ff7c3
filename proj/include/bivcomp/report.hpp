#pragma once

// JSON documents exchanged by the command-line tool.
//
//   bivcomp.model/1  {"schema", "phi", "marginals": [marginal, marginal]}
//     marginal       {"family": "wiw"|"pariw"|"ibiw",
//                     "head": {"mu", "sigma", "tau"},   (tau null unless ibiw)
//                     "tail": {"alpha", "gamma"}, "theta", "r"}
//   bivcomp.fit/1    output of `fit`
//   bivcomp.eval/1   output of `eval`
//
// Every key is always present; parameters a family lacks are null.

#include <bivcomp/composite.hpp>
#include <bivcomp/copula.hpp>
#include <bivcomp/estimation.hpp>
#include <bivcomp/ingest.hpp>

#include <json.hpp>

#include <string>
#include <type_traits>
#include <variant>

namespace bivcomp {

using Json = nlohmann::ordered_json;

inline constexpr const char* kModelSchema = "bivcomp.model/1";
inline constexpr const char* kFitSchema = "bivcomp.fit/1";
inline constexpr const char* kEvalSchema = "bivcomp.eval/1";

inline Json to_json(const CompositeParams& p) {
    Json head = {{"mu", nullptr}, {"sigma", nullptr}, {"tau", nullptr}};
    std::visit(
        [&](const auto& h) {
            head["mu"] = h.mu;
            head["sigma"] = h.sigma;
            if constexpr (std::is_same_v<std::decay_t<decltype(h)>, InverseBurrParams>) head["tau"] = h.tau;
        },
        p.head);
    return Json{{"family", std::string(family_tag(p.family()))},
                {"head", head},
                {"tail", {{"alpha", p.tail.alpha}, {"gamma", p.tail.gamma}}},
                {"theta", p.theta},
                {"r", mixing_weight(p)}};
}

namespace detail {

inline double number_at(const Json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw input_error(where + ": missing numeric field '" + key + "'");
    return j.at(key).get<double>();
}

}  // namespace detail

inline CompositeParams composite_params_from_json(const Json& j, const std::string& where = "marginal") {
    if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
        throw input_error(where + ": missing 'family'");
    const auto family = parse_family(j.at("family").get<std::string>());
    if (!family) throw input_error(where + ": unknown family '" + j.at("family").get<std::string>() + "'");
    if (!j.contains("head") || !j.contains("tail")) throw input_error(where + ": missing 'head' or 'tail'");
    const Json& h = j.at("head");
    const double mu = detail::number_at(h, "mu", where + ".head");
    const double sigma = detail::number_at(h, "sigma", where + ".head");
    HeadParams head;
    switch (*family) {
        case HeadFamily::weibull: head = WeibullParams{mu, sigma}; break;
        case HeadFamily::paralogistic: head = ParalogisticParams{mu, sigma}; break;
        case HeadFamily::inverse_burr: head = InverseBurrParams{mu, sigma, detail::number_at(h, "tau", where + ".head")}; break;
    }
    CompositeParams p{head,
                      InverseWeibullParams{detail::number_at(j.at("tail"), "alpha", where + ".tail"),
                                           detail::number_at(j.at("tail"), "gamma", where + ".tail")},
                      detail::number_at(j, "theta", where)};
    validate(p);
    return p;
}

inline Json to_json(const BivariateModel& m) {
    return Json{{"schema", kModelSchema},
                {"phi", m.phi().value()},
                {"marginals", Json::array({to_json(m.first().params()), to_json(m.second().params())})}};
}

/// Reads a model document, or the "model" member of a fit/eval report.
inline BivariateModel model_from_json(const Json& doc) {
    const Json& j = (doc.is_object() && doc.contains("model") && !doc.contains("marginals")) ? doc.at("model") : doc;
    if (!j.is_object() || !j.contains("marginals") || !j.at("marginals").is_array() || j.at("marginals").size() != 2)
        throw input_error("model document needs a two-element 'marginals' array");
    const double phi = detail::number_at(j, "phi", "model");
    return BivariateModel{CompositeModel{composite_params_from_json(j.at("marginals").at(0), "marginals[0]")},
                          CompositeModel{composite_params_from_json(j.at("marginals").at(1), "marginals[1]")},
                          GumbelParam{phi}};
}

inline Json to_json(const MarginalFit& f) {
    Json j = to_json(f.params);
    j["log_likelihood"] = f.log_likelihood;
    j["df"] = f.df;
    j["paper_df"] = f.paper_df;
    j["converged"] = f.converged;
    j["iterations"] = f.iterations;
    return j;
}

inline Json to_json(const FitReport& r) {
    return Json{{"family", std::string(family_tag(r.first.family()))},
                {"name", std::string(family_name(r.first.family()))},
                {"n", r.n},
                {"seed", r.seed},
                {"marginals", Json::array({to_json(r.first), to_json(r.second)})},
                {"phi", r.copula.phi},
                {"phi_at_boundary", r.copula.at_boundary},
                {"copula_log_likelihood", r.copula.log_likelihood},
                {"log_likelihood", r.log_likelihood},
                {"df", r.df},
                {"paper_df", r.paper_df},
                {"aic", r.aic},
                {"bic", r.bic},
                {"aic_paper_df", r.aic_paper_df},
                {"bic_paper_df", r.bic_paper_df},
                {"kendall_tau_model", r.model_tau},
                {"kendall_tau_empirical", r.empirical_tau},
                {"joint_refined", r.joint_refined},
                {"converged", r.converged()},
                {"model", to_json(r.model())}};
}

inline Json to_json(const SummaryStats& s) {
    return Json{{"n", s.n},       {"min", s.min},   {"max", s.max},           {"q1", s.q1},
                {"median", s.median}, {"q3", s.q3}, {"mean", s.mean}, {"skewness", s.skewness},
                {"kurtosis", s.kurtosis}};
}

inline Json to_json(const Histogram& h) {
    return Json{{"log_scale", h.log_scale}, {"edges", h.edges}, {"counts", h.counts}, {"density", h.density()}};
}

}  // namespace bivcomp
