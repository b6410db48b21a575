#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "framefx/fx.hpp"
#include "framefx/frame_problem.hpp"
#include "framefx/stepped_column.hpp"
#include "test_support.hpp"

using namespace framefx;

namespace {

nlohmann::json frame_doc(const std::string& file) {
    std::ifstream in(testing::data_dir() / "frames" / file);
    return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("stepped column closed forms") {
    auto p = stepped_column_problem();
    REQUIRE(p->dimension() == 50);
    const std::vector<double> x(50, 30.0);
    const Evaluation e = p->evaluate(x);
    const double pi = std::numbers::pi;
    CHECK(e.objective == doctest::Approx(0.00785 * 10 * 50 * pi * 900).epsilon(1e-13));
    // base moment 10 kN * 500 cm
    CHECK(e.violations[0] + 16.0 == doctest::Approx(4 * 5000 / (pi * 27000)).epsilon(1e-13));
    CHECK(std::abs(e.violations[0] + 16.0 - 0.2358) < 1e-4);
    CHECK(e.feasible);

    const std::vector<double> small(50, 12.5), big(50, 25.0);
    const auto es = p->evaluate(small), eb = p->evaluate(big);
    for (std::size_t k = 0; k < 50; ++k)
        CHECK(es.violations[k] + 16.0 == doctest::Approx(8 * (eb.violations[k] + 16.0)).epsilon(1e-12));

    // stress falls toward the tip at constant radius
    for (std::size_t k = 1; k < 50; ++k) CHECK(e.violations[k] < e.violations[k - 1]);
    CHECK(p->segment_moment(49) == 100.0);
    CHECK_THROWS(p->evaluate(std::vector<double>(49, 30.0)));
}

TEST_CASE("stepped column fully stressed design") {
    auto p = stepped_column_problem();
    std::vector<double> x(50);
    for (std::size_t k = 0; k < 50; ++k) x[k] = std::cbrt(4 * p->segment_moment(k) / (std::numbers::pi * 16.0));
    const Evaluation e = p->evaluate(x);
    for (double g : e.violations) CHECK(std::abs(g) < 1e-12);
    CHECK(p->design_areas(x)[0] == doctest::Approx(std::numbers::pi * x[0] * x[0]));
}

TEST_CASE("discrete stepped column") {
    SteppedColumnSpec spec;
    spec.segment_count = 3;
    spec.catalog_radii = {2.7, 1.5, 3.2, 2.2};
    auto p = stepped_column_problem(spec);
    REQUIRE(p->discrete());
    REQUIRE(p->domains()[0].is_index());
    CHECK(p->domains()[0].upper == 3.0);
    const auto r = p->radii(std::vector<double>{0.0, 1.4, 3.0});
    CHECK(r[0] == doctest::Approx(1.5));
    CHECK(r[1] == doctest::Approx(2.2));
    CHECK(r[2] == doctest::Approx(3.2));
    CHECK(reduced_dimension(std::vector<FunctioningRule>{p->default_rule()}, 3) == 2);
}

TEST_CASE("stepped column reduces to two variables") {
    auto p = stepped_column_problem();
    CHECK(reduced_dimension(std::vector<FunctioningRule>{p->default_rule()}, 50) == 2);
    const auto stacks = p->column_stacks();
    REQUIRE(stacks.size() == 1);
    CHECK(stacks[0].heights.back() == 490.0);
}

TEST_CASE("shipped frames have the expected variable counts") {
    struct Want {
        const char* file;
        std::size_t n, reduced;
    };
    for (const Want w : {Want{"frame8.json", 8, 6}, Want{"frame15.json", 11, 5}, Want{"frame24.json", 20, 8}}) {
        CAPTURE(w.file);
        auto p = frame_problem(testing::data_dir() / "frames" / w.file);
        CHECK(p->dimension() == w.n);
        CHECK(reduced_dimension(p->config().functioning, p->dimension()) == w.reduced);
        for (const auto& d : p->domains()) CHECK(d.is_index());
    }
}

TEST_CASE("frame evaluation is deterministic and ordered by section size") {
    auto p = frame_problem(testing::data_dir() / "frames" / "frame8.json");
    const auto big = p->extreme_design(true);
    const auto small = p->extreme_design(false);
    const Evaluation a = p->evaluate(big), b = p->evaluate(big);
    CHECK(a.objective == b.objective);
    CHECK(a.violations == b.violations);
    CHECK(a.feasible);
    const Evaluation s = p->evaluate(small);
    CHECK_FALSE(s.feasible);
    CHECK(s.objective < a.objective);

    // fractional indices snap to the nearest pool position
    std::vector<double> shifted = big;
    for (auto& v : shifted) v -= 0.3;
    CHECK(p->evaluate(shifted).objective == a.objective);
}

TEST_CASE("unloaded frame is feasible") {
    auto doc = frame_doc("frame15.json");
    doc["loads"] = nlohmann::json::array();
    doc["member_loads"] = nlohmann::json::array();
    auto cfg = std::make_shared<const FrameConfig>(parse_frame_config(doc, testing::data_dir() / "frames"));
    const FrameProblem p(cfg);
    const Evaluation e = p.evaluate(p.extreme_design(false));
    CHECK(e.feasible);
    for (double g : e.violations) CHECK(g <= 0.0);
}

TEST_CASE("relaxation agrees with the catalog at catalog areas") {
    auto cfg = std::make_shared<const FrameConfig>(load_frame_config(testing::data_dir() / "frames" / "frame8.json"));
    const FrameProblem discrete(cfg);
    const FrameRelaxation relaxed(cfg);
    const auto& pool = *cfg->group_pools[0];
    for (std::size_t idx : {std::size_t{0}, pool.size() / 2, pool.size() - 1}) {
        const std::vector<double> xd(discrete.dimension(), static_cast<double>(idx));
        const std::vector<double> xr(relaxed.dimension(), pool[idx].area);
        const Evaluation a = discrete.evaluate(xd), b = relaxed.evaluate(xr);
        CHECK(testing::rel_close(a.objective, b.objective, 1e-12));
        for (std::size_t k = 0; k < a.violations.size(); ++k)
            CHECK(std::abs(a.violations[k] - b.violations[k]) <= 1e-9 * std::max(1.0, std::abs(a.violations[k])));
    }
    const SectionShape mid = interpolate_shape(pool, 0.5 * (pool[10].area + pool[11].area));
    CHECK(mid.moment_of_inertia_x >= std::min(pool[10].moment_of_inertia_x, pool[11].moment_of_inertia_x));
    CHECK(mid.moment_of_inertia_x <= std::max(pool[10].moment_of_inertia_x, pool[11].moment_of_inertia_x));
}

TEST_CASE("sphere") {
    SphereProblem s(3);
    CHECK(s.evaluate(std::vector<double>{1, 2, 3}).objective == 14.0);
    CHECK(s.evaluate(std::vector<double>{0, 0, 0}).feasible);
    CHECK(s.domains()[2].lower == -5.0);
}

TEST_CASE("snap helpers") {
    const std::vector<VariableDomain> d = {VariableDomain::continuous(-1, 1),
                                           VariableDomain::index(std::make_shared<const SectionPool>(
                                               std::vector<SectionShape>{testing::shape(1, 1), testing::shape(2, 2),
                                                                         testing::shape(3, 3)},
                                               "t"))};
    CHECK(snap_to_domains(d, std::vector<double>{3.0, 1.6}) == std::vector<double>{1.0, 2.0});
    CHECK(snap_to_domains(d, std::vector<double>{-3.0, -7.0}) == std::vector<double>{-1.0, 0.0});
    CHECK(snap_index(d[1], 0.49) == 0);
    CHECK(snap_index(d[1], 99) == 2);
}
