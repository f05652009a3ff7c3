#pragma once

// Subcommand implementations behind tools/bivcomp. Each command returns its
// report as JSON; render_text() turns a report into aligned tables.

#include <bivcomp/composite.hpp>
#include <bivcomp/copula.hpp>
#include <bivcomp/diagnostics.hpp>
#include <bivcomp/errors.hpp>
#include <bivcomp/estimation.hpp>
#include <bivcomp/ingest.hpp>
#include <bivcomp/kendall.hpp>
#include <bivcomp/report.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <future>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace bivcomp {

inline constexpr std::uint64_t kDefaultSeed = 20240601;

enum class OutputFormat { json, text };

struct RunConfig {
    std::string input;
    std::string cols = "0,1";
    std::string family = "all";
    std::optional<std::uint64_t> seed;
    std::string out;
    OutputFormat format = OutputFormat::json;
    OptimizerConfig optimizer;
    std::string params;
    std::size_t n = 0;
    std::size_t bins = 30;
    bool log_bins = false;
    bool joint_refine = false;
    CsvOptions csv;

    std::uint64_t effective_seed() const { return seed.value_or(kDefaultSeed); }
};

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitInput = 2, kExitConvergence = 3 };

namespace detail {

inline std::vector<HeadFamily> requested_families(const std::string& tag) {
    if (tag == "all") return {std::begin(kAllFamilies), std::end(kAllFamilies)};
    const auto f = parse_family(tag);
    if (!f) throw input_error("unknown family '" + tag + "' (expected wiw, pariw, ibiw or all)");
    return {*f};
}

inline Json read_json_file(const std::string& path) {
    if (path.empty()) throw input_error("--params <json> is required");
    std::ifstream in(path);
    if (!in) throw input_error("file not found or unreadable: " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw input_error(path + ": invalid JSON: " + e.what());
    }
}

inline ClaimPairSample load_input(const RunConfig& cfg) {
    if (cfg.input.empty()) throw input_error("--input <csv> is required");
    return load_csv(cfg.input, ColumnSpec::parse(cfg.cols), cfg.csv);
}

inline Json optimizer_json(const OptimizerConfig& c) {
    return Json{{"max_iterations", c.max_iterations},
                {"tolerance", c.tolerance},
                {"restarts", c.restarts},
                {"simplex_scale", c.simplex_scale},
                {"seed", c.seed}};
}

inline Json rejected_json(const ClaimPairSample& s) {
    Json a = Json::array();
    for (const auto& r : s.rejected) a.push_back({{"line", r.line}, {"message", r.message}});
    return a;
}

}  // namespace detail

/// Fits the requested families and ranks them by AIC, then BIC.
inline Json cmd_fit(const RunConfig& cfg) {
    const auto families = detail::requested_families(cfg.family);
    const ClaimPairSample sample = detail::load_input(cfg);
    OptimizerConfig opt = cfg.optimizer;
    opt.seed = cfg.effective_seed();
    validate(opt);
    if (sample.size() < opt.min_observations)
        throw input_error("n too small: " + std::to_string(sample.size()) + " valid rows, at least " +
                          std::to_string(opt.min_observations) + " required");
    const auto x = sample.column(0), y = sample.column(1);
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); }) ||
        std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); }))
        throw degenerate_error("a claim column is constant");

    std::vector<std::future<FitReport>> jobs;
    for (HeadFamily f : families)
        jobs.push_back(std::async(std::launch::async, [&, f] {
            FitReport r = fit_bivariate(sample.records, f, f, opt);
            return cfg.joint_refine ? refine_joint(sample.records, r, opt) : r;
        }));
    std::vector<FitReport> reports;
    for (auto& j : jobs) reports.push_back(j.get());

    std::vector<std::size_t> rank(reports.size());
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
        if (reports[a].aic != reports[b].aic) return reports[a].aic < reports[b].aic;
        return reports[a].bic < reports[b].bic;
    });

    Json fits = Json::array(), ranking = Json::array();
    for (const auto& r : reports) fits.push_back(to_json(r));
    for (auto k : rank) ranking.push_back(std::string(family_tag(reports[k].first.family())));
    const FitReport& best = reports[rank.front()];

    return Json{{"schema", kFitSchema},
                {"command", "fit"},
                {"seed", opt.seed},
                {"input", sample.source},
                {"columns", {sample.first_name, sample.second_name}},
                {"n", sample.size()},
                {"rejected_rows", detail::rejected_json(sample)},
                {"optimizer", detail::optimizer_json(opt)},
                {"kendall_tau_empirical", best.empirical_tau},
                {"fits", fits},
                {"ranking", ranking},
                {"best", ranking.front()},
                {"model", to_json(best.model())}};
}

/// Samples n pairs from the model in --params. Returns CSV text with a
/// '#'-prefixed metadata header recording the model and seed.
inline std::string cmd_simulate(const RunConfig& cfg) {
    if (cfg.n < 1) throw input_error("simulate: --n must be >= 1");
    const Json doc = detail::read_json_file(cfg.params);
    const BivariateModel model = model_from_json(doc);
    const std::uint64_t seed = cfg.effective_seed();
    const auto pairs = model.sample_pairs(cfg.n, seed);

    std::ostringstream out;
    out << "# bivcomp simulate\n";
    out << "# seed: " << seed << "\n";
    out << "# n: " << cfg.n << "\n";
    out << "# model: " << to_json(model).dump() << "\n";
    ClaimPairSample s;
    s.records = pairs;
    write_csv(out, s);
    return out.str();
}

/// Metrics of a given model on data: likelihoods, AIC/BIC, Kendall's tau,
/// per-coordinate KS statistics and histogram/density overlay data.
inline Json cmd_eval(const RunConfig& cfg) {
    Json doc = detail::read_json_file(cfg.params);
    if (doc.contains("fits") && cfg.family != "all") {
        const auto f = detail::requested_families(cfg.family).front();
        bool found = false;
        for (const auto& fit : doc.at("fits"))
            if (fit.value("family", "") == family_tag(f)) {
                doc = fit;
                found = true;
                break;
            }
        if (!found) throw input_error("params document has no fit for family '" + cfg.family + "'");
    }
    const BivariateModel model = model_from_json(doc);
    const ClaimPairSample sample = detail::load_input(cfg);
    const auto x = sample.column(0), y = sample.column(1);

    const double ll1 = model.first().log_likelihood(x);
    const double ll2 = model.second().log_likelihood(y);
    const double llc = copula_log_likelihood(model.phi(), pseudo_observations(model, sample.records));
    const double ll = model.log_likelihood(sample.records);
    const int df = marginal_df(model.first().family()) + marginal_df(model.second().family()) + 1;
    const int paper_df = marginal_paper_df(model.first().family()) + marginal_paper_df(model.second().family()) + 1;
    const double n = static_cast<double>(sample.size());

    Json overlays = Json::array();
    Json ks = Json::array();
    for (int c = 0; c < 2; ++c) {
        const CompositeModel& m = c == 0 ? model.first() : model.second();
        const auto& col = c == 0 ? x : y;
        ks.push_back(ks_statistic(col, [&](double v) { return m.cdf(v); }));
        const Histogram h = histogram(col, cfg.bins, cfg.log_bins);
        std::vector<double> mids, fitted;
        for (std::size_t k = 0; k + 1 < h.edges.size(); ++k) {
            const double mid = cfg.log_bins ? std::sqrt(h.edges[k] * h.edges[k + 1]) : 0.5 * (h.edges[k] + h.edges[k + 1]);
            mids.push_back(mid);
            fitted.push_back(m.pdf(mid));
        }
        const auto grid = log_grid(m.quantile(1e-6), m.quantile(1.0 - 1e-6), 1024);
        std::vector<double> grid_pdf;
        for (double g : grid) grid_pdf.push_back(m.pdf(g));
        Json hj = to_json(h);
        hj["midpoints"] = mids;
        hj["fitted_pdf"] = fitted;
        overlays.push_back({{"column", c == 0 ? sample.first_name : sample.second_name},
                            {"histogram", hj},
                            {"grid", {{"y", grid}, {"pdf", grid_pdf}}}});
    }

    return Json{{"schema", kEvalSchema},
                {"command", "eval"},
                {"seed", cfg.effective_seed()},
                {"input", sample.source},
                {"n", sample.size()},
                {"model", to_json(model)},
                {"marginal_log_likelihoods", {ll1, ll2}},
                {"copula_log_likelihood", llc},
                {"log_likelihood", ll},
                {"df", df},
                {"paper_df", paper_df},
                {"aic", aic(ll, df)},
                {"bic", bic(ll, df, n)},
                {"aic_paper_df", aic(ll, paper_df)},
                {"bic_paper_df", bic(ll, paper_df, n)},
                {"kendall_tau_model", kendall_tau(model.phi())},
                {"kendall_tau_empirical", empirical_kendall_tau(x, y)},
                {"ks_statistic", ks},
                {"overlay", overlays}};
}

/// Descriptive statistics and histogram data per coordinate.
inline Json cmd_summarize(const RunConfig& cfg) {
    const ClaimPairSample sample = detail::load_input(cfg);
    Json cols = Json::array();
    for (int c = 0; c < 2; ++c) {
        const auto v = sample.column(c);
        cols.push_back({{"column", c == 0 ? sample.first_name : sample.second_name},
                        {"summary", to_json(summarize(v))},
                        {"histogram", to_json(histogram(v, cfg.bins, cfg.log_bins))}});
    }
    return Json{{"schema", "bivcomp.summary/1"},
                {"command", "summarize"},
                {"seed", cfg.effective_seed()},
                {"input", sample.source},
                {"n", sample.size()},
                {"rejected_rows", detail::rejected_json(sample)},
                {"columns", cols}};
}

/// Nonzero when any fit in a report failed to converge.
inline int report_exit_code(const Json& report) {
    if (report.contains("fits"))
        for (const auto& f : report.at("fits"))
            if (!f.value("converged", true)) return kExitConvergence;
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Text rendering
// ---------------------------------------------------------------------------
namespace detail {

class TextTable {
public:
    explicit TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    std::string str() const {
        std::vector<std::size_t> width;
        for (const auto& r : rows_) {
            width.resize(std::max(width.size(), r.size()), 0);
            for (std::size_t k = 0; k < r.size(); ++k) width[k] = std::max(width[k], r[k].size());
        }
        std::string out;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            for (std::size_t k = 0; k < rows_[i].size(); ++k) {
                out += rows_[i][k];
                if (k + 1 < rows_[i].size()) out += std::string(width[k] - rows_[i][k].size() + 2, ' ');
            }
            out += '\n';
            if (i == 0) {
                std::size_t total = 0;
                for (auto w : width) total += w + 2;
                out += std::string(total > 2 ? total - 2 : total, '-') + '\n';
            }
        }
        return out;
    }

private:
    std::vector<std::vector<std::string>> rows_;
};

inline std::string num(const Json& v, const char* fmt = "%.6g") {
    if (v.is_null()) return "--";
    if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
    if (v.is_number_integer() || v.is_number_unsigned()) return std::to_string(v.get<long long>());
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v.get<double>());
    return buf;
}

inline std::pair<std::string, std::string> head_tail(const std::string& tag) {
    if (tag == "wiw") return {"Weibull", "Inverse Weibull"};
    if (tag == "pariw") return {"Paralogistic", "Inverse Weibull"};
    return {"Inverse Burr", "Inverse Weibull"};
}

inline std::string render_fit(const Json& r) {
    std::string out = "Model comparison (n = " + num(r.at("n")) + ", seed = " + num(r.at("seed")) + ")\n";
    TextTable cmp({"rank", "head", "tail", "df", "paper df", "logLik", "AIC", "BIC", "converged"});
    int rank = 1;
    for (const auto& tag : r.at("ranking"))
        for (const auto& f : r.at("fits"))
            if (f.at("family") == tag) {
                const auto [h, t] = head_tail(tag.get<std::string>());
                cmp.add({std::to_string(rank++), h, t, num(f.at("df")), num(f.at("paper_df")),
                         num(f.at("log_likelihood"), "%.2f"), num(f.at("aic"), "%.2f"), num(f.at("bic"), "%.2f"),
                         num(f.at("converged"))});
            }
    out += cmp.str();

    for (int c = 0; c < 2; ++c) {
        out += "\nParameter estimates, " + r.at("columns").at(c).get<std::string>() + (c == 1 ? " and copula" : "") + "\n";
        std::vector<std::string> hdr{"head", "tail", "mu", "sigma", "tau", "alpha", "gamma", "r", "theta"};
        if (c == 1) hdr.push_back("phi");
        TextTable t(hdr);
        for (const auto& f : r.at("fits")) {
            const auto& m = f.at("marginals").at(c);
            const auto [h, tl] = head_tail(f.at("family").get<std::string>());
            std::vector<std::string> row{h,
                                         tl,
                                         num(m.at("head").at("mu"), "%.4f"),
                                         num(m.at("head").at("sigma"), "%.6g"),
                                         num(m.at("head").at("tau"), "%.6g"),
                                         num(m.at("tail").at("alpha"), "%.4f"),
                                         num(m.at("tail").at("gamma"), "%.2f"),
                                         num(m.at("r"), "%.4f"),
                                         num(m.at("theta"), "%.2f")};
            if (c == 1) row.push_back(num(f.at("phi"), "%.4f"));
            t.add(row);
        }
        out += t.str();
    }

    out += "\nKendall's tau, fitted model vs empirical\n";
    TextTable k({"head", "tail", "model", "empirical"});
    for (const auto& f : r.at("fits")) {
        const auto [h, t] = head_tail(f.at("family").get<std::string>());
        k.add({h, t, num(f.at("kendall_tau_model"), "%.4f"), num(f.at("kendall_tau_empirical"), "%.4f")});
    }
    out += k.str();
    return out;
}

inline std::string render_eval(const Json& r) {
    TextTable t({"metric", "value"});
    t.add({"n", num(r.at("n"))});
    t.add({"logLik marginal 1", num(r.at("marginal_log_likelihoods").at(0), "%.4f")});
    t.add({"logLik marginal 2", num(r.at("marginal_log_likelihoods").at(1), "%.4f")});
    t.add({"logLik copula", num(r.at("copula_log_likelihood"), "%.4f")});
    t.add({"logLik total", num(r.at("log_likelihood"), "%.4f")});
    t.add({"df (paper df)", num(r.at("df")) + " (" + num(r.at("paper_df")) + ")"});
    t.add({"AIC", num(r.at("aic"), "%.2f")});
    t.add({"BIC", num(r.at("bic"), "%.2f")});
    t.add({"Kendall tau model", num(r.at("kendall_tau_model"), "%.4f")});
    t.add({"Kendall tau empirical", num(r.at("kendall_tau_empirical"), "%.4f")});
    t.add({"KS statistic 1", num(r.at("ks_statistic").at(0), "%.5f")});
    t.add({"KS statistic 2", num(r.at("ks_statistic").at(1), "%.5f")});
    return t.str();
}

inline std::string render_summary(const Json& r) {
    TextTable t({"variable", "min", "max", "Q1", "median", "Q3", "mean", "skewness", "kurtosis"});
    for (const auto& c : r.at("columns")) {
        const auto& s = c.at("summary");
        t.add({c.at("column").get<std::string>(), num(s.at("min"), "%.1f"), num(s.at("max"), "%.1f"),
               num(s.at("q1"), "%.1f"), num(s.at("median"), "%.1f"), num(s.at("q3"), "%.1f"),
               num(s.at("mean"), "%.1f"), num(s.at("skewness"), "%.2f"), num(s.at("kurtosis"), "%.2f")});
    }
    return t.str();
}

}  // namespace detail

inline std::string render_text(const Json& report) {
    const std::string cmd = report.value("command", "");
    if (cmd == "fit") return detail::render_fit(report);
    if (cmd == "eval") return detail::render_eval(report);
    if (cmd == "summarize") return detail::render_summary(report);
    return report.dump(2) + "\n";
}

inline std::string render(const Json& report, OutputFormat format) {
    return format == OutputFormat::json ? report.dump(2) + "\n" : render_text(report);
}

}  // namespace bivcomp
