#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "framefx/grouping.hpp"
#include "framefx/stepped_column.hpp"
#include "test_support.hpp"

using namespace framefx;

namespace {

/// Direct four-point difference for one pair, no caching.
double pair_lambda(const ScalarFunction& f, std::vector<double> lo, const std::vector<double>& hi, std::size_t i,
                   std::size_t j) {
    auto mid = [&](std::size_t k) { return 0.5 * (lo[k] + hi[k]); };
    std::vector<double> a = lo, b = lo, c = lo, d = lo;
    b[i] = mid(i);
    c[j] = mid(j);
    d[i] = mid(i);
    d[j] = mid(j);
    return std::abs((f(b) - f(a)) - (f(d) - f(c)));
}

struct CountingFn {
    std::size_t* calls;
    ScalarFunction inner;
    double operator()(std::span<const double> x) const {
        ++*calls;
        return inner(x);
    }
};

}  // namespace

TEST_CASE("bilinear pair") {
    const ScalarFunction f = [](std::span<const double> x) { return x[0] * x[1]; };
    const std::vector<double> lo = {0, 0}, hi = {1, 1};
    const auto m = interaction_matrix(f, lo, hi);
    CHECK(m.at(0, 1) == doctest::Approx(0.25));
    CHECK(m.interacts(0, 1));
    CHECK(m.edge_count() == 1);
    CHECK(m.at(0, 1) == m.at(1, 0));
}

TEST_CASE("separable functions have no edges") {
    const ScalarFunction sphere = [](std::span<const double> x) {
        double s = 0;
        for (double v : x) s += v * v;
        return s;
    };
    const std::vector<double> lo(6, -5.0), hi(6, 5.0);
    const auto m = interaction_matrix(sphere, lo, hi);
    CHECK(m.edge_count() == 0);
    for (std::size_t i = 0; i < 6; ++i) CHECK(m.interacts(i, i));

    // random sums of univariate terms
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int t = 0; t < 20; ++t) {
        const double a = u(gen), b = u(gen), c = u(gen);
        const ScalarFunction g = [=](std::span<const double> x) {
            return a * std::exp(x[0]) + b * std::sin(x[1]) + c * x[2] * x[2] * x[2] + std::cosh(x[3]);
        };
        const std::vector<double> l = {u(gen) - 4, u(gen) - 4, u(gen) - 4, u(gen) - 4};
        const std::vector<double> h = {l[0] + 3, l[1] + 3, l[2] + 3, l[3] + 3};
        CHECK(interaction_matrix(g, l, h).edge_count() == 0);
    }
}

TEST_CASE("matrix matches a direct four-point oracle") {
    const ScalarFunction f = [](std::span<const double> x) {
        return x[0] * x[1] + std::exp(x[2] * x[3]) + x[4] + 0.1 * x[1] * x[4] * x[4];
    };
    const std::vector<double> lo = {0, -1, 0.5, 0, 1}, hi = {2, 1, 1.5, 1, 3};
    std::size_t calls = 0;
    const auto m = interaction_matrix(CountingFn{&calls, f}, lo, hi);
    CHECK(calls == (25 + 5 + 2) / 2);
    CHECK(m.fe_cost == calls);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            if (i == j) continue;
            CHECK(m.at(i, j) == doctest::Approx(pair_lambda(f, lo, hi, i, j)).epsilon(1e-12));
            CHECK(m.at(i, j) == m.at(j, i));
            CHECK(m.interacts(i, j) == m.interacts(j, i));
        }
    }
    CHECK(m.interacts(0, 1));
    CHECK(m.interacts(2, 3));
    CHECK(m.interacts(1, 4));
    CHECK_FALSE(m.interacts(0, 2));
    CHECK(m.edge_count() == 3);
}

TEST_CASE("threshold scales with the probed magnitudes") {
    const ScalarFunction f = [](std::span<const double> x) { return 1e12 + x[0] + x[1]; };
    const std::vector<double> lo = {0, 0}, hi = {1, 1};
    const auto m = interaction_matrix(f, lo, hi);
    CHECK(m.threshold_at(0, 1) == doctest::Approx(1e-10 * (1e12 + 1)));
    CHECK_FALSE(m.interacts(0, 1));
    const ScalarFunction small = [](std::span<const double> x) { return 1e-3 * x[0] * x[1]; };
    CHECK(interaction_matrix(small, lo, hi).threshold_at(0, 1) == doctest::Approx(1e-10));
}

TEST_CASE("failures report the probe point") {
    const ScalarFunction f = [](std::span<const double> x) -> double {
        if (x[1] > 0.1) throw std::runtime_error("boom");
        return x[0];
    };
    const std::vector<double> lo = {0, 0}, hi = {1, 1};
    try {
        interaction_matrix(f, lo, hi);
        FAIL("expected failure");
    } catch (const InteractionError& e) {
        CHECK(e.point()[1] == 0.5);
    }
    const std::vector<double> nan_hi = {1, 2};
    const ScalarFunction g = [](std::span<const double> x) { return x[1] > 0.5 ? std::nan("") : 1.0; };
    CHECK_THROWS_AS(interaction_matrix(g, lo, nan_hi), InteractionError);
}

TEST_CASE("stepped column couples the base segment to every other") {
    SteppedColumnSpec spec;
    spec.segment_count = 10;
    const auto m = problem_interactions(stepped_column_problem(spec));
    CHECK(m.n == 10);
    CHECK(m.fe_cost == 56);
    for (std::size_t j = 1; j < 10; ++j) CHECK(m.interacts(0, j));

    // without the penalty the weight is separable
    const auto plain = interaction_matrix(
        [p = stepped_column_problem(spec)](std::span<const double> x) { return p->evaluate(x).objective; },
        std::vector<double>(10, 3.0), std::vector<double>(10, 50.0));
    CHECK(plain.edge_count() == 0);
}

TEST_CASE("penalized objective") {
    auto p = stepped_column_problem();
    const auto f = penalized_objective(p, 2.0);
    const std::vector<double> x(50, 10.0);
    const Evaluation e = p->evaluate(x);
    double sum = 0;
    for (double g : e.violations) sum += std::max(0.0, g);
    CHECK(f(x) == doctest::Approx(e.objective * (1 + 2.0 * sum)).epsilon(1e-14));
    const std::vector<double> ok(50, 50.0);
    CHECK(f(ok) == p->evaluate(ok).objective);
}

TEST_CASE("heat map rendering") {
    const ScalarFunction f = [](std::span<const double> x) { return x[0] * x[1] + 100 * x[1] * x[2]; };
    const std::vector<double> lo(3, 0.0), hi(3, 1.0);
    const auto m = interaction_matrix(f, lo, hi);
    CHECK(matrix_gray_level(m, 1, 1) == 0);
    CHECK(matrix_gray_level(m, 0, 2) == 255);
    CHECK(matrix_gray_level(m, 1, 2) == 0);    // strongest pair
    CHECK(matrix_gray_level(m, 0, 1) == 200);  // weakest pair
    std::ostringstream svg;
    write_matrix_svg(m, svg);
    CHECK(svg.str().find("rgb(255,255,255)") != std::string::npos);
    CHECK(svg.str().find("rgb(200,200,200)") != std::string::npos);
    std::ostringstream csv;
    write_matrix_csv(m, csv);
    const std::string text = csv.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);

    const auto dir = testing::scratch("grouping");
    render_matrix(m, dir);
    CHECK(std::filesystem::exists(dir / "interactions.csv"));
    CHECK(std::filesystem::exists(dir / "interactions.svg"));
    std::filesystem::remove_all(dir);
}
