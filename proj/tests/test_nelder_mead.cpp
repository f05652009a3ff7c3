#include <bivcomp/nelder_mead.hpp>

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace bivcomp;
using Catch::Matchers::WithinAbs;

TEST_CASE("shifted quadratic", "[nelder_mead]") {
    auto f = [](const std::vector<double>& x) {
        return (x[0] - 3.0) * (x[0] - 3.0) + 4.0 * (x[1] + 1.0) * (x[1] + 1.0) + 7.0;
    };
    NelderMeadOptions opt;
    opt.tolerance = 1e-14;
    const auto r = nelder_mead(f, {0.0, 0.0}, opt);
    REQUIRE(r.converged);
    REQUIRE_THAT(r.x[0], WithinAbs(3.0, 1e-5));
    REQUIRE_THAT(r.x[1], WithinAbs(-1.0, 1e-5));
    REQUIRE_THAT(r.value, WithinAbs(7.0, 1e-12));
}

TEST_CASE("Rosenbrock", "[nelder_mead]") {
    auto f = [](const std::vector<double>& x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    NelderMeadOptions opt;
    opt.tolerance = 1e-16;
    opt.max_iterations = 20000;
    const auto r = nelder_mead(f, {-1.2, 1.0}, opt);
    REQUIRE(r.converged);
    REQUIRE_THAT(r.x[0], WithinAbs(1.0, 1e-4));
    REQUIRE_THAT(r.x[1], WithinAbs(1.0, 1e-4));
}

TEST_CASE("non-finite objective values are avoided", "[nelder_mead]") {
    // infeasible for x < 0
    auto f = [](const std::vector<double>& x) { return x[0] < 0.0 ? std::nan("") : (x[0] - 0.5) * (x[0] - 0.5); };
    const auto r = nelder_mead(f, {2.0});
    REQUIRE(r.converged);
    REQUIRE_THAT(r.x[0], WithinAbs(0.5, 1e-3));
}

TEST_CASE("iteration budget", "[nelder_mead]") {
    auto f = [](const std::vector<double>& x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    NelderMeadOptions opt;
    opt.max_iterations = 5;
    const auto r = nelder_mead(f, {-1.2, 1.0}, opt);
    REQUIRE_FALSE(r.converged);
    REQUIRE(r.iterations == 5);
}
