// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <bivcomp/commands.hpp>
#include <bivcomp/composite.hpp>
#include <bivcomp/copula.hpp>
#include <bivcomp/estimation.hpp>
#include <bivcomp/kendall.hpp>

#include "support/cli.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace bivcomp;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

void fail(Outcome& o, const std::string& why) {
    if (o.pass) o.detail = why;
    o.pass = false;
}

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a) {
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

// 1 ---------------------------------------------------------------------------
Outcome published_weights() {
    struct Row {
        const char* name;
        CompositeParams p;
        double reported;
        bool asserted;
    };
    const std::vector<Row> rows{
        {"P-IW bi", {ParalogisticParams{0.7991, 0.0008}, {0.9046, 10034.72}, 25449.23}, 0.8832, true},
        {"W-IW bi", {WeibullParams{0.5394, 4644.45}, {1.3988, 13751.62}, 27179.21}, 0.9102, true},
        {"P-IW pd", {ParalogisticParams{1.2596, 0.0007}, {2.4474, 11634.1078}, 16941.38}, 0.9865, true},
        {"W-IW pd", {WeibullParams{0.5485, 1.2e11}, {0.5139, 410.9973}, 100.0001}, 0.2191, true},
        {"IB-IW bi", {InverseBurrParams{0.0002, 1658.49, 0.0003}, {1.0264, 4281.5141}, 3877.8737}, 0.5658, false},
        {"IB-IW pd", {InverseBurrParams{0.0301, 34.9757, 0.0018}, {0.8872, 430.1964}, 499.9917}, 0.3531, false},
    };
    Outcome o;
    for (const auto& r : rows) {
        const double w = mixing_weight(r.p);
        const double w2 = mixing_weight_closed_form(r.p);
        const bool ok = std::fabs(w - r.reported) <= 0.01 && std::fabs(w - w2) <= 1e-12;
        std::printf("    %-9s r = %.4f  reported %.4f  %s\n", r.name, w, r.reported,
                    r.asserted ? (ok ? "ok" : "MISMATCH") : "(info: inputs rounded to 1 significant digit)");
        if (r.asserted && !ok) fail(o, std::string(r.name) + " off by more than 0.01");
    }
    o.detail = o.pass ? "4/4 rows within 0.01" : o.detail;
    return o;
}

// 2 ---------------------------------------------------------------------------
Outcome information_criterion_gaps() {
    struct Row {
        const char* name;
        int df;
        double aic, bic;
    };
    const std::vector<Row> rows{{"P-IW", 9, 265365.91, 265428.01},
                                {"IB-IW", 11, 266858.41, 266934.21},
                                {"W-IW", 9, 270218.81, 270280.81}};
    const double n = 7263.0, per_df = std::log(n) - 2.0;
    Outcome o;
    for (const auto& r : rows) {
        const double gap = r.bic - r.aic;
        const double expected = bic(0.0, r.df, n) - aic(0.0, r.df);
        const bool ok = std::fabs(gap - expected) <= 0.15;
        std::printf("    %-6s gap %.2f  df*(ln n - 2) = %.2f  implied df %.3f  %s\n", r.name, gap, expected, gap / per_df,
                    ok ? "ok" : "MISMATCH");
        if (!ok) fail(o, std::string(r.name) + " gap off by more than 0.15");
    }
    o.detail = o.pass ? "3/3 gaps within 0.15" : o.detail;
    return o;
}

// 3 ---------------------------------------------------------------------------
Outcome normalization() {
    std::mt19937_64 g(3003);
    Outcome o;
    double worst_mass = 0.0, worst_gap = 0.0;
    for (HeadFamily f : kAllFamilies)
        for (int i = 0; i < 100; ++i) {
            const CompositeModel m{fixtures::random_params(f, g)};
            const double th = m.theta();
            const double mass = oracle::integrate_positive([&](double y) { return m.pdf(y); }, th);
            const double left = m.pdf(th);
            const double gap = std::fabs(left - m.pdf(std::nextafter(th, 2 * th))) / left;
            worst_mass = std::max(worst_mass, std::fabs(mass - 1.0));
            worst_gap = std::max(worst_gap, gap);
            if (!(std::fabs(mass - 1.0) <= 1e-6)) fail(o, fmt("%s #%d integrates to %.9f", family_tag(f).data(), i, mass));
            if (!(gap < 1e-8)) fail(o, fmt("%s #%d continuity gap %.3g", family_tag(f).data(), i, gap));
        }
    if (o.pass) o.detail = fmt("300 models, max |mass-1| %.2e, max gap %.2e", worst_mass, worst_gap);
    return o;
}

// 4 ---------------------------------------------------------------------------
Outcome copula_correctness() {
    Outcome o;
    const double grid[] = {0.1, 0.3, 0.5, 0.7, 0.9};
    double worst_fd = 0.0;
    for (double phi : {1.2, 2.0, 5.0})
        for (double u : grid)
            for (double v : grid) {
                const double c = copula_density(GumbelParam{phi}, u, v);
                const double fd = oracle::gumbel_mixed_partial(phi, u, v, 1e-5);
                const double rel = std::fabs(c - fd) / fd;
                worst_fd = std::max(worst_fd, rel);
                if (!(rel <= 1e-4)) fail(o, fmt("density vs FD at phi=%g (%g,%g): rel %.2e", phi, u, v, rel));
            }
    for (double u : grid)
        for (double v : grid)
            if (std::fabs(copula_density(GumbelParam{1.0}, u, v) - 1.0) > 1e-12) fail(o, "independence density != 1");

    std::mt19937_64 g(4004);
    std::uniform_real_distribution<double> U(1e-9, 1.0 - 1e-9), P(1.0, 20.0);
    for (int i = 0; i < 100000; ++i) {
        const GumbelParam cp{P(g)};
        double u1 = U(g), u2 = U(g), v1 = U(g), v2 = U(g);
        const double c = copula_cdf(cp, u1, v1);
        if (c < std::max(u1 + v1 - 1.0, 0.0) - 1e-15 || c > std::min(u1, v1) + 1e-15) {
            fail(o, fmt("Frechet bound violated at phi=%g", cp.value()));
            break;
        }
        if (u1 > u2) std::swap(u1, u2);
        if (v1 > v2) std::swap(v1, v2);
        const double vol = copula_cdf(cp, u2, v2) - copula_cdf(cp, u2, v1) - copula_cdf(cp, u1, v2) + copula_cdf(cp, u1, v1);
        if (vol < -1e-14) {
            fail(o, fmt("rectangle volume %.3g at phi=%g", vol, cp.value()));
            break;
        }
    }
    if (o.pass) o.detail = fmt("75 FD points, max rel %.2e; 1e5 random bound/rectangle checks", worst_fd);
    return o;
}

// 5 ---------------------------------------------------------------------------
double sampled_tau(double phi, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    const auto uv = sample_copula(GumbelParam{phi}, 100000, rng);
    std::vector<double> u, v;
    for (const auto& p : uv) {
        u.push_back(p.u);
        v.push_back(p.v);
    }
    return empirical_kendall_tau(u, v);
}

Outcome tau_identity() {
    Outcome o;
    std::string d;
    for (double phi : {1.1, 1.5, 2.0, 3.0}) {
        const double t = sampled_tau(phi, 5000 + static_cast<std::uint64_t>(phi * 10));
        d += fmt("phi %.1f: %.4f vs %.4f; ", phi, t, 1.0 - 1.0 / phi);
        if (!(std::fabs(t - (1.0 - 1.0 / phi)) <= 0.02)) fail(o, fmt("phi=%g sampled tau %.4f", phi, t));
    }
    const double t = sampled_tau(1.0710, 5663);
    d += fmt("phi 1.0710: %.4f vs 0.0663", t);
    if (!(std::fabs(t - 0.0663) <= 0.01)) fail(o, fmt("phi=1.0710 sampled tau %.4f", t));
    if (o.pass) o.detail = d;
    return o;
}

// 6 ---------------------------------------------------------------------------
Outcome ifm_recovery() {
    struct Truth {
        HeadFamily family;
        double phi;
    };
    const Truth truths[] = {{HeadFamily::weibull, 1.5}, {HeadFamily::paralogistic, 1.3}, {HeadFamily::inverse_burr, 2.0}};
    constexpr int kSeeds = 10;
    Outcome o;
    std::string summary;
    for (const auto& t : truths) {
        const CompositeParams p1 = fixtures::recovery_truth(t.family);
        const CompositeParams p2 = fixtures::rescaled(p1, 4.0);
        const BivariateModel truth{CompositeModel{p1}, CompositeModel{p2}, GumbelParam{t.phi}};
        const auto v1 = fixtures::named_values(p1), v2 = fixtures::named_values(p2);

        // per-parameter hit counts: marginal 1 values, marginal 2 values, r1, r2, phi
        std::vector<std::string> names;
        for (const auto& v : v1) names.push_back(std::string(v.name) + "1");
        for (const auto& v : v2) names.push_back(std::string(v.name) + "2");
        names.insert(names.end(), {"r1", "r2", "phi"});
        std::vector<int> hits(names.size(), 0);

        for (int s = 0; s < kSeeds; ++s) {
            const auto data = truth.sample_pairs(5000, static_cast<std::uint64_t>(600 + s));
            OptimizerConfig cfg;
            cfg.seed = static_cast<std::uint64_t>(s + 1);
            const FitReport r = fit_bivariate(data, t.family, t.family, cfg);
            const auto e1 = fixtures::named_values(r.first.params), e2 = fixtures::named_values(r.second.params);
            std::size_t k = 0;
            for (std::size_t i = 0; i < v1.size(); ++i, ++k) hits[k] += std::fabs(e1[i].value / v1[i].value - 1.0) <= 0.15;
            for (std::size_t i = 0; i < v2.size(); ++i, ++k) hits[k] += std::fabs(e2[i].value / v2[i].value - 1.0) <= 0.15;
            hits[k++] += std::fabs(r.first.weight - truth.first().weight()) <= 0.05;
            hits[k++] += std::fabs(r.second.weight - truth.second().weight()) <= 0.05;
            hits[k++] += std::fabs(r.copula.phi - t.phi) <= 0.15;
        }
        std::printf("    %-5s", family_tag(t.family).data());
        for (std::size_t k = 0; k < names.size(); ++k) {
            std::printf(" %s %d/%d", names[k].c_str(), hits[k], kSeeds);
            if (hits[k] < 8) fail(o, fmt("%s %s recovered in %d/%d seeds", family_tag(t.family).data(), names[k].c_str(),
                                         hits[k], kSeeds));
        }
        std::printf("\n");
    }
    if (o.pass) o.detail = "3 models x 10 seeds, every parameter >= 8/10";
    return o;
}

// 7 ---------------------------------------------------------------------------
Outcome tau_oracle() {
    std::mt19937_64 g(7007);
    Outcome o;
    for (int d = 0; d < 50; ++d) {
        const std::size_t n = 2 + g() % 299;
        std::uniform_int_distribution<int> level(0, d % 2 ? 10 : 1000000);
        std::vector<double> x(n), y(n);
        do {
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = level(g);
                y[i] = level(g) + (d % 3 == 0 ? x[i] : 0.0);
            }
        } while (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }) ||
                 std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; }));
        if (empirical_kendall_tau(x, y) != oracle::kendall_brute_force(x, y)) fail(o, fmt("dataset %d (n=%zu) differs", d, n));
    }
    if (o.pass) o.detail = "50/50 datasets identical";
    return o;
}

// 8 ---------------------------------------------------------------------------
Outcome end_to_end() {
    cli::TempDir dir("acceptance");
    const BivariateModel m{CompositeModel{fixtures::recovery_truth(HeadFamily::paralogistic)},
                           CompositeModel{fixtures::rescaled(fixtures::recovery_truth(HeadFamily::weibull), 4.0)},
                           GumbelParam{1.4}};
    cli::write_file(dir / "model.json", to_json(m).dump(2));
    std::string outputs[2];
    Outcome o;
    for (int run = 0; run < 2; ++run) {
        const auto tag = std::to_string(run);
        const auto claims = dir / ("claims" + tag + ".csv"), fit = dir / ("fit" + tag + ".json");
        const auto eval = dir / ("eval" + tag + ".json");
        const int a = cli::run(dir, "simulate --params " + cli::q(dir / "model.json") + " --n 1000 --seed 11 --out " + cli::q(claims)).exit_code;
        const int b = cli::run(dir, "fit --input " + cli::q(claims) + " --seed 12 --out " + cli::q(fit)).exit_code;
        const int c = cli::run(dir, "eval --input " + cli::q(claims) + " --params " + cli::q(fit) + " --out " + cli::q(eval)).exit_code;
        if (a || b || c) fail(o, fmt("exit codes simulate %d fit %d eval %d", a, b, c));
        // file names differ between runs only through the input path recorded in the reports
        std::string text = cli::slurp(claims) + cli::slurp(fit) + cli::slurp(eval);
        for (auto pos = text.find(claims.string()); pos != std::string::npos; pos = text.find(claims.string()))
            text.replace(pos, claims.string().size(), "<claims>");
        outputs[run] = text;
    }
    if (outputs[0].empty()) fail(o, "no output");
    if (outputs[0] != outputs[1]) fail(o, "outputs differ between runs");
    if (o.pass) o.detail = fmt("simulate/fit/eval outputs identical (%zu bytes)", outputs[0].size());
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all{
        {1, "continuity weight reproduces published r", published_weights},
        {2, "BIC-AIC gaps match df*(ln 7263 - 2)", information_criterion_gaps},
        {3, "composite pdf normalization and continuity", normalization},
        {4, "Gumbel copula density, bounds, rectangle inequality", copula_correctness},
        {5, "Kendall tau identity by sampling", tau_identity},
        {6, "two-stage IFM parameter recovery", ifm_recovery},
        {7, "merge-sort Kendall tau equals brute force", tau_oracle},
        {8, "simulate | fit | eval determinism", end_to_end},
    };
    int failures = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s [%d] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
