#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "wtar/optimize/differential_evolution.hpp"
#include "wtar/optimize/nelder_mead.hpp"

using namespace wtar::optimize;

namespace {

double sphere(const std::vector<double>& x, double center) {
    double acc = 0.0;
    for (double v : x) acc += (v - center) * (v - center);
    return acc;
}

Bounds box(int dim, double lo, double hi) {
    Bounds b;
    b.lower.assign(dim, lo);
    b.upper.assign(dim, hi);
    return b;
}

}  // namespace

TEST_CASE("differential evolution minimizes a shifted sphere") {
    auto f = [](const std::vector<double>& x) { return sphere(x, 0.7); };
    DeOptions opt;
    opt.population = 50;
    opt.generations = 300;
    opt.seed = 3;
    const DeResult res = differential_evolution(f, box(5, -4.0, 4.0), opt);
    CHECK(res.best_value < 1e-8);
    for (double v : res.best) CHECK(v == Catch::Approx(0.7).margin(1e-3));
}

TEST_CASE("differential evolution stays inside the box") {
    auto f = [](const std::vector<double>& x) { return sphere(x, 2.0); };
    DeOptions opt;
    opt.seed = 5;
    const DeResult res = differential_evolution(f, box(3, -1.0, 1.0), opt);
    for (const auto& member : res.population)
        for (double v : member) {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
    CHECK(res.best_value == Catch::Approx(3.0).margin(1e-6));
}

TEST_CASE("differential evolution is seed-deterministic") {
    auto f = [](const std::vector<double>& x) { return sphere(x, -0.25); };
    DeOptions opt;
    opt.population = 20;
    opt.generations = 50;
    opt.seed = 11;
    const DeResult a = differential_evolution(f, box(4, -2.0, 2.0), opt);
    const DeResult b = differential_evolution(f, box(4, -2.0, 2.0), opt);
    REQUIRE(a.best.size() == b.best.size());
    for (std::size_t i = 0; i < a.best.size(); ++i) CHECK(a.best[i] == b.best[i]);
    CHECK(a.best_value == b.best_value);
}

TEST_CASE("the best population member is reported") {
    auto f = [](const std::vector<double>& x) { return sphere(x, 0.0); };
    DeOptions opt;
    opt.population = 15;
    opt.generations = 30;
    opt.seed = 1;
    const DeResult res = differential_evolution(f, box(3, -1.0, 1.0), opt);
    for (double v : res.values) CHECK(res.best_value <= v);
}

TEST_CASE("nelder-mead polishes a rough start") {
    auto rosenbrock = [](const std::vector<double>& x) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        return a * a + 100.0 * b * b;
    };
    const std::vector<double> start{-1.2, 1.0};
    NelderMeadOptions opt;
    opt.max_iterations = 3000;
    opt.tolerance = 1e-14;
    const NelderMeadResult res = nelder_mead(rosenbrock, start, box(2, -5.0, 5.0), opt);
    CHECK(res.best_value < 1e-6);
    CHECK(res.best[0] == Catch::Approx(1.0).margin(1e-2));
    CHECK(res.best[1] == Catch::Approx(1.0).margin(1e-2));
}

TEST_CASE("nelder-mead never returns worse than its start") {
    auto f = [](const std::vector<double>& x) { return sphere(x, 3.5); };  // optimum outside box
    const std::vector<double> start{0.9, 0.9};
    NelderMeadOptions opt;
    opt.max_iterations = 60;
    const NelderMeadResult res = nelder_mead(f, start, box(2, -1.0, 1.0), opt);
    CHECK(res.best_value <= f(start));
    for (double v : res.best) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("nelder-mead refinement of a DE optimum does not regress") {
    auto f = [](const std::vector<double>& x) {
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            acc += (x[i] - 0.1 * static_cast<double>(i)) * (x[i] - 0.1 * static_cast<double>(i));
        return acc + 0.3 * std::sin(7.0 * x[0]);
    };
    DeOptions de_opt;
    de_opt.population = 30;
    de_opt.generations = 60;
    de_opt.seed = 9;
    const Bounds b = box(3, -2.0, 2.0);
    const DeResult de = differential_evolution(f, b, de_opt);
    const NelderMeadResult nm = nelder_mead(f, de.best, b);
    CHECK(nm.best_value <= de.best_value);
    for (double v : de.values) CHECK(nm.best_value <= v);
}
