#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "framefx/budget.hpp"
#include "framefx/fx.hpp"
#include "framefx/optim.hpp"
#include "framefx/problem.hpp"
#include "framefx/stepped_column.hpp"

namespace framefx {

/// A full-space problem together with its functioning rules, default budgets
/// and a continuous view for interaction analysis.
struct ProblemBundle {
    std::string name;
    ProblemPtr problem;
    std::vector<FunctioningRule> rules;
    std::optional<StrategyBudgets> budgets;
    ProblemPtr relaxation;
    nlohmann::json descriptor;  // identifies the problem in plan manifests
};

ProblemBundle stepped_column_bundle(const SteppedColumnSpec& spec = {});
ProblemBundle sphere_bundle(std::size_t n);
ProblemBundle frame_bundle(const std::filesystem::path& config_path);

struct CellSpec {
    Algorithm algorithm = Algorithm::de;
    Strategy strategy = Strategy::none;
    CellBudget budget;

    /// "<algorithm>-<strategy>", e.g. "de-fx".
    std::string name() const;
};

class PlanError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentPlan {
    std::string name;
    ProblemBundle problem;
    std::vector<Strategy> strategies{Strategy::none, Strategy::ifx, Strategy::fx};
    std::vector<Algorithm> algorithms{Algorithm::pso, Algorithm::de};
    std::size_t trials = 51;
    std::uint64_t seed_base = 0;
    StrategyBudgets budgets;
    PsoParams pso;
    DeParams de;

    /// Throws PlanError on an empty cell set, zero trials, bad budgets or a
    /// functioning strategy without rules.
    void validate() const;

    /// Algorithms outermost, strategies in declaration order.
    std::vector<CellSpec> cells() const;

    nlohmann::json manifest() const;
};

struct StackReport {
    std::string name;
    bool monotone = true;
    /// First pair (lower, upper) of stack positions whose area increases.
    std::optional<std::pair<std::size_t, std::size_t>> offending;
    std::vector<double> heights;
    std::vector<double> areas;
    std::vector<double> normalized;  // areas / base area
};

/// Non-increasing-area check for every declared column stack of `problem`.
std::vector<StackReport> practicality_report(const Problem& problem, std::span<const double> full_design);

struct RunRecord {
    std::string problem;
    Algorithm algorithm = Algorithm::de;
    Strategy strategy = Strategy::none;
    std::uint64_t seed = 0;
    std::size_t population = 0;
    std::size_t max_fe = 0;
    std::size_t fe_used = 0;
    std::vector<std::size_t> fe_history;
    std::vector<double> best_history;  // NaN until a feasible point is seen
    std::vector<double> infeasible_fraction_history;
    std::vector<double> best_design;   // full space, indices snapped
    double best_objective = 0.0;
    std::vector<double> best_violations;
    bool best_feasible = false;
    std::vector<StackReport> stacks;
    bool failed = false;
    std::string error;

    std::string cell() const { return CellSpec{algorithm, strategy, {}}.name(); }
    /// Final best feasible objective, +inf when no feasible design was found.
    double final_objective() const;
};

nlohmann::json to_json(const RunRecord& r);
RunRecord record_from_json(const nlohmann::json& j);

/// One seeded trial. Evaluation errors are caught and reported in the record.
RunRecord run_trial(const ProblemBundle& bundle, const CellSpec& cell, std::uint64_t seed,
                    const PsoParams& pso = {}, const DeParams& de = {});

struct MeanHistory {
    std::vector<double> fe;
    std::vector<double> best;  // mean over trials with a feasible point; NaN if none
    std::vector<double> infeasible_fraction;
    std::vector<std::size_t> feasible_trials;
};

/// Pointwise mean over records that share one generation structure.
MeanHistory mean_history(const std::vector<RunRecord>& records);

struct CellSummary {
    std::string cell;
    Algorithm algorithm = Algorithm::de;
    Strategy strategy = Strategy::none;
    std::size_t trials = 0;
    std::size_t failed = 0;
    std::size_t feasible = 0;
    double mean = 0.0;
    double median = 0.0;
    double best = 0.0;
    double worst = 0.0;
    double mean_initial_best = 0.0;  // trials without a feasible start count as +inf
    double improvement_vs_none = std::numeric_limits<double>::quiet_NaN();
    std::size_t monotone_designs = 0;
};

/// Statistics over the non-failed records of one cell.
CellSummary summarize_cell(const std::string& cell, const std::vector<RunRecord>& records);

/// 100 * (median_none - median_cell) / median_none.
double improvement_vs_none(const CellSummary& cell, const CellSummary& none);

double median(std::vector<double> values);

struct PlanResult {
    std::filesystem::path directory;
    std::vector<RunRecord> records;
    std::vector<CellSummary> summaries;
    std::size_t new_trials = 0;
};

struct RunOptions {
    std::size_t jobs = 1;
    std::function<void(const RunRecord&)> on_record;
};

/// Runs every (cell, seed) pair not yet persisted under out_root/<plan name>,
/// then rewrites summary.csv and histories/. An existing manifest must match.
PlanResult run_plan(const ExperimentPlan& plan, const std::filesystem::path& out_root, const RunOptions& options = {});

/// Loads every record of a results directory, grouped by cell directory name.
std::vector<std::pair<std::string, std::vector<RunRecord>>> load_results(const std::filesystem::path& plan_dir);

/// Writes `text` to `path` through a temporary file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& text);

void write_summary_csv(const std::vector<CellSummary>& summaries, std::ostream& out);
void write_history_csv(const MeanHistory& history, std::ostream& out);

}  // namespace framefx
