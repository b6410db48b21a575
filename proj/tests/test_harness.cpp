#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "framefx/harness.hpp"
#include "test_support.hpp"

using namespace framefx;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

RunRecord record_with(std::vector<double> best, std::vector<double> frac, std::vector<std::size_t> fe = {}) {
    RunRecord r;
    if (fe.empty())
        for (std::size_t g = 0; g < best.size(); ++g) fe.push_back(10 * (g + 1));
    r.fe_history = fe;
    r.best_history = std::move(best);
    r.infeasible_fraction_history = std::move(frac);
    r.best_feasible = std::isfinite(r.best_history.back());
    return r;
}

ExperimentPlan small_plan(const std::string& name) {
    ExperimentPlan plan;
    plan.name = name;
    SteppedColumnSpec spec;
    spec.segment_count = 6;
    plan.problem = stepped_column_bundle(spec);
    plan.algorithms = {Algorithm::de};
    plan.strategies = {Strategy::none, Strategy::fx};
    plan.trials = 1;
    plan.seed_base = 3;
    plan.budgets[Strategy::none] = {10, 200};
    plan.budgets[Strategy::fx] = {8, 120};
    return plan;
}

class Exploding final : public Problem {
public:
    Exploding() : d_(2, VariableDomain::continuous(0, 1)) {}
    std::string name() const override { return "exploding"; }
    const std::vector<VariableDomain>& domains() const override { return d_; }
    std::size_t constraint_count() const override { return 0; }
    Evaluation evaluate(std::span<const double>) const override { throw std::runtime_error("solver blew up"); }

private:
    std::vector<VariableDomain> d_;
};

}  // namespace

TEST_CASE("improvement against the unassisted cell") {
    CellSummary none, cell;
    none.median = 100.0;
    cell.median = 100.0;
    CHECK(improvement_vs_none(cell, none) == 0.0);
    cell.median = 90.0;
    CHECK(improvement_vs_none(cell, none) == doctest::Approx(10.0));
    cell.median = 125.0;
    CHECK(improvement_vs_none(cell, none) == doctest::Approx(-25.0));
    cell.median = std::numeric_limits<double>::infinity();
    CHECK(std::isnan(improvement_vs_none(cell, none)));
}

TEST_CASE("median") {
    CHECK(median({3, 1, 2}) == 2.0);
    CHECK(median({4, 1, 2, 3}) == 2.5);
    CHECK(std::isnan(median({})));
    CHECK(median({1, std::numeric_limits<double>::infinity(), 5}) == 5.0);
}

TEST_CASE("mean history") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::vector<RunRecord> recs = {record_with({nan, 10, 8}, {1.0, 0.5, 0.2}),
                                         record_with({12, 9, 6}, {0.6, 0.3, 0.0})};
    const auto m = mean_history(recs);
    REQUIRE(m.fe.size() == 3);
    CHECK(m.fe == std::vector<double>{10, 20, 30});
    CHECK(m.best[0] == 12.0);
    CHECK(m.best[1] == 9.5);
    CHECK(m.best[2] == 7.0);
    CHECK(m.feasible_trials == std::vector<std::size_t>{1, 2, 2});
    CHECK(m.infeasible_fraction[0] == doctest::Approx(0.8));
    CHECK(m.infeasible_fraction[2] == doctest::Approx(0.1));

    const std::vector<RunRecord> none_feasible = {record_with({nan, nan}, {1, 1})};
    CHECK(std::isnan(mean_history(none_feasible).best[1]));

    const std::vector<RunRecord> ragged = {record_with({1, 2}, {0, 0}), record_with({1, 2, 3}, {0, 0, 0})};
    CHECK_THROWS_AS(mean_history(ragged), PlanError);
}

TEST_CASE("cell summary") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<RunRecord> recs = {record_with({20, 10}, {0, 0}), record_with({nan, 30}, {1, 0}),
                                   record_with({nan, nan}, {1, 1})};
    RunRecord failed;
    failed.failed = true;
    recs.push_back(failed);
    const auto s = summarize_cell("de-none", recs);
    CHECK(s.trials == 4);
    CHECK(s.failed == 1);
    CHECK(s.feasible == 2);
    CHECK(s.median == 30.0);
    CHECK(s.best == 10.0);
    CHECK(std::isinf(s.worst));
    CHECK(std::isinf(s.mean_initial_best));
}

TEST_CASE("practicality report") {
    SteppedColumnSpec spec;
    spec.segment_count = 4;
    auto p = stepped_column_problem(spec);
    const std::vector<double> good = {10, 9, 9, 4}, bad = {10, 9, 9.5, 4};
    auto ok = practicality_report(*p, good);
    REQUIRE(ok.size() == 1);
    CHECK(ok[0].monotone);
    CHECK(ok[0].normalized.front() == 1.0);
    CHECK(ok[0].normalized.back() == doctest::Approx(0.16));
    auto no = practicality_report(*p, bad);
    CHECK_FALSE(no[0].monotone);
    REQUIRE(no[0].offending);
    CHECK(no[0].offending->first == 1);
    CHECK(no[0].offending->second == 2);
    CHECK(practicality_report(SphereProblem(2), std::vector<double>{0, 0}).empty());
}

TEST_CASE("trial records") {
    const auto bundle = stepped_column_bundle();
    for (Strategy s : {Strategy::none, Strategy::ifx, Strategy::fx}) {
        const CellSpec cell{Algorithm::pso, s, {20, 400}};
        const RunRecord r = run_trial(bundle, cell, 11);
        CAPTURE(cell.name());
        REQUIRE_FALSE(r.failed);
        CHECK(r.fe_used == 400);
        CHECK(r.best_design.size() == 50);
        CHECK(r.fe_history.back() == 400);
        // the stored design re-evaluates to the stored score
        const Evaluation e = bundle.problem->evaluate(r.best_design);
        CHECK(e.objective == r.best_objective);
        CHECK(e.violations == r.best_violations);
        if (s == Strategy::fx) CHECK(r.stacks[0].monotone);
        if (r.best_feasible) CHECK(r.final_objective() <= r.best_objective);

        const RunRecord back = record_from_json(nlohmann::json::parse(to_json(r).dump()));
        CHECK(to_json(back) == to_json(r));
        CHECK(back.best_design == r.best_design);

        CHECK(to_json(run_trial(bundle, cell, 11)) == to_json(r));
    }
}

TEST_CASE("failed trials are recorded, not thrown") {
    ProblemBundle b;
    b.name = "exploding";
    b.problem = std::make_shared<const Exploding>();
    const RunRecord r = run_trial(b, CellSpec{Algorithm::de, Strategy::none, {5, 50}}, 0);
    CHECK(r.failed);
    CHECK(r.error.find("solver blew up") != std::string::npos);
    CHECK(std::isinf(r.final_objective()));
    const RunRecord back = record_from_json(to_json(r));
    CHECK(back.failed);
}

TEST_CASE("plan validation") {
    auto plan = small_plan("v");
    CHECK_NOTHROW(plan.validate());
    CHECK(plan.cells().size() == 2);
    CHECK(plan.cells()[1].name() == "de-fx");
    plan.trials = 0;
    CHECK_THROWS_AS(plan.validate(), PlanError);
    plan = small_plan("v");
    plan.budgets[Strategy::fx] = {8, 4};
    CHECK_THROWS_AS(plan.validate(), PlanError);
    plan = small_plan("v");
    plan.problem = sphere_bundle(4);
    CHECK_THROWS_AS(plan.validate(), PlanError);
}

TEST_CASE("plans persist, resume and refuse foreign manifests") {
    const auto root = testing::scratch("plan");
    auto plan = small_plan("tiny");
    const PlanResult first = run_plan(plan, root);
    CHECK(first.new_trials == 2);
    CHECK(first.records.size() == 2);
    const auto dir = root / "tiny";
    const auto r1 = dir / "de-none" / "3.json";
    const auto r2 = dir / "de-fx" / "3.json";
    REQUIRE(std::filesystem::exists(r1));
    REQUIRE(std::filesystem::exists(r2));
    CHECK(std::filesystem::exists(dir / "summary.csv"));
    CHECK(std::filesystem::exists(dir / "histories" / "de-fx.csv"));
    const std::string a = slurp(r1), b = slurp(r2), summary = slurp(dir / "summary.csv");

    const PlanResult again = run_plan(plan, root, {4, {}});
    CHECK(again.new_trials == 0);
    CHECK(slurp(r1) == a);
    CHECK(slurp(r2) == b);
    CHECK(slurp(dir / "summary.csv") == summary);

    // growing the trial count keeps existing seeds
    auto more = plan;
    more.trials = 2;
    more.name = "tiny-more";
    const PlanResult wider = run_plan(more, root, {2, {}});
    CHECK(wider.new_trials == 4);
    CHECK(slurp(root / "tiny-more" / "de-none" / "3.json") == a);

    auto changed = plan;
    changed.budgets[Strategy::none] = {10, 300};
    CHECK_THROWS_AS(run_plan(changed, root), PlanError);

    const auto loaded = load_results(dir);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].first == "de-fx");
    CHECK(to_json(loaded[1].second[0]) == to_json(first.records[0]));
    std::filesystem::remove_all(root);
}

TEST_CASE("summary csv layout") {
    std::ostringstream out;
    CellSummary s;
    s.cell = "pso-ifx";
    s.algorithm = Algorithm::pso;
    s.strategy = Strategy::ifx;
    s.median = 1.5;
    write_summary_csv({s}, out);
    const std::string text = out.str();
    CHECK(text.rfind("cell,algorithm,strategy,trials", 0) == 0);
    CHECK(text.find("pso-ifx,pso,ifx,") != std::string::npos);
}
