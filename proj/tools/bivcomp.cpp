// bivcomp: fit, simulate and evaluate bivariate composite claim-severity models.

#include <bivcomp/commands.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace {

void add_common(CLI::App* app, bivcomp::RunConfig& cfg, std::string& format, std::string& delim, std::string& decimal) {
    app->add_option("--input", cfg.input, "CSV file of paired claims");
    app->add_option("--cols", cfg.cols, "two columns, by header name or 0-based index")->default_val("0,1");
    app->add_option("--seed", cfg.seed, "random seed (a fixed default is used and reported when omitted)");
    app->add_option("--out", cfg.out, "output file (stdout when omitted)");
    app->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}))->default_val("json");
    app->add_option("--delimiter", delim, "CSV field delimiter")->default_val(",");
    app->add_option("--decimal", decimal, "CSV decimal separator")->default_val(".");
    app->add_flag("--strict", cfg.csv.strict, "abort on the first invalid row instead of skipping it");
}

void add_optimizer(CLI::App* app, bivcomp::RunConfig& cfg) {
    app->add_option("--restarts", cfg.optimizer.restarts, "optimizer restarts per marginal")->default_val(3);
    app->add_option("--tol", cfg.optimizer.tolerance, "objective tolerance")->default_val(1e-8);
    app->add_option("--max-iter", cfg.optimizer.max_iterations, "iterations per restart")->default_val(5000);
}

int emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return std::cout ? 0 : bivcomp::kExitFailure;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw bivcomp::input_error("cannot write output file: " + path);
    out << text;
    return out ? 0 : bivcomp::kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace bivcomp;
    CLI::App app{"Bivariate composite (spliced) claim-severity models joined by a Gumbel copula"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format = "json", delim = ",", decimal = ".";

    auto* fit = app.add_subcommand("fit", "fit wiw/pariw/ibiw bivariate models by IFM and rank them by AIC/BIC");
    add_common(fit, cfg, format, delim, decimal);
    add_optimizer(fit, cfg);
    fit->add_option("--family", cfg.family, "wiw, pariw, ibiw or all")->default_val("all");
    fit->add_flag("--joint-refine", cfg.joint_refine, "polish IFM estimates by full joint maximum likelihood");

    auto* sim = app.add_subcommand("simulate", "sample claim pairs from a model document");
    add_common(sim, cfg, format, delim, decimal);
    sim->add_option("--params", cfg.params, "model JSON (or a fit report)")->required();
    sim->add_option("--n", cfg.n, "number of pairs")->required();

    auto* eval = app.add_subcommand("eval", "evaluate a model on data");
    add_common(eval, cfg, format, delim, decimal);
    eval->add_option("--params", cfg.params, "model JSON or fit report")->required();
    eval->add_option("--family", cfg.family, "pick this family from a fit report")->default_val("all");
    eval->add_option("--bins", cfg.bins, "histogram bins")->default_val(30);
    eval->add_flag("--log-bins", cfg.log_bins, "geometric histogram bins");

    auto* summ = app.add_subcommand("summarize", "descriptive statistics and histogram data");
    add_common(summ, cfg, format, delim, decimal);
    summ->add_option("--bins", cfg.bins, "histogram bins")->default_val(30);
    summ->add_flag("--log-bins", cfg.log_bins, "geometric histogram bins");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    try {
        if (delim.size() != 1 || decimal.size() != 1) throw input_error("--delimiter and --decimal take one character");
        cfg.csv.delimiter = delim.front();
        cfg.csv.decimal_separator = decimal.front();
        if (cfg.csv.delimiter == cfg.csv.decimal_separator) throw input_error("delimiter and decimal separator must differ");
        cfg.format = format == "text" ? OutputFormat::text : OutputFormat::json;

        if (sim->parsed()) return emit(cmd_simulate(cfg), cfg.out);
        Json report;
        if (fit->parsed()) report = cmd_fit(cfg);
        else if (eval->parsed()) report = cmd_eval(cfg);
        else report = cmd_summarize(cfg);
        const int rc = emit(render(report, cfg.format), cfg.out);
        return rc != 0 ? rc : report_exit_code(report);
    } catch (const stage_error& e) {
        std::cerr << "error [" << e.stage() << "]: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const domain_error& e) {
        std::cerr << "invalid parameter: " << e.what() << "\n";
        return kExitInput;
    } catch (const degenerate_error& e) {
        std::cerr << "degenerate input: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
