#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "framefx/problem.hpp"
#include "framefx/sections.hpp"

namespace framefx {

class FunctioningError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class FunctioningKind { exponential_column };

/// Replaces a column line of q variables by (base value, alpha).
/// Variables are listed lowest first; heights are measured from the base.
struct FunctioningRule {
    std::vector<std::size_t> replaced_variable_ids;
    std::vector<double> heights;
    FunctioningKind kind = FunctioningKind::exponential_column;

    static constexpr std::size_t reduced_parameter_count = 2;

    std::size_t replaced_count() const { return replaced_variable_ids.size(); }
    double top_height() const { return heights.back(); }

    /// heights[0] == 0, strictly ascending, one height per variable, q >= 2.
    void validate() const;
};

struct AlphaBounds {
    double lower = 1.0;
    double upper = 1.0;
};

/// (value_max / value_min)^(1 / h_u): the decay rate that takes the largest
/// catalog value at the base down to the smallest at the top.
double alpha_max(double value_min, double value_max, double top_height);

/// value[k] = base / alpha^heights[k].
std::vector<double> expand_continuous(double base_value, double alpha, std::span<const double> heights);

/// Discrete counterpart acting on areas. Each level snaps to the nearest pool
/// area no larger than the level below, so areas never increase with height.
std::vector<std::size_t> expand_discrete(std::size_t base_index, double alpha, std::span<const double> heights,
                                         const SectionPool& pool);

/// Rules must be individually valid, reference ids < n and be pairwise disjoint.
void validate_rules(std::span<const FunctioningRule> rules, std::size_t n);

/// n - sum(q_j - m_j).
std::size_t reduced_dimension(std::span<const FunctioningRule> rules, std::size_t n);

/// Alpha search interval for a rule whose variables share `domain`.
AlphaBounds alpha_bounds(const VariableDomain& domain, const FunctioningRule& rule);

/// A problem searched through functioning rules. Reduced vectors hold the
/// untouched variables first (ascending original index), then one
/// (base, alpha) pair per rule.
class ReducedProblem final : public Problem {
public:
    ReducedProblem(ProblemPtr full, std::vector<FunctioningRule> rules);

    std::string name() const override;
    const std::vector<VariableDomain>& domains() const override { return domains_; }
    std::size_t constraint_count() const override { return full_->constraint_count(); }
    Evaluation evaluate(std::span<const double> x) const override;
    std::vector<double> full_design(std::span<const double> x) const override;
    const Problem& full_problem() const override { return full_->full_problem(); }
    std::vector<double> design_areas(std::span<const double> full) const override {
        return full_->design_areas(full);
    }
    std::vector<ColumnStack> column_stacks() const override { return full_->column_stacks(); }

    /// Full-space vector for a reduced point. Continuous values are clamped into
    /// their original bounds; index values are exact pool indices.
    std::vector<double> expand(std::span<const double> reduced) const;

    const std::vector<FunctioningRule>& rules() const { return rules_; }
    const Problem& wrapped() const { return *full_; }

private:
    ProblemPtr full_;
    std::vector<FunctioningRule> rules_;
    std::vector<std::size_t> free_ids_;
    std::vector<VariableDomain> domains_;
};

/// Reduced-space view of `problem`; one reduced evaluation is one full evaluation.
std::shared_ptr<const ReducedProblem> wrap_objective(ProblemPtr problem, std::vector<FunctioningRule> rules);

}  // namespace framefx
