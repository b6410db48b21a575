#include "framefx/fx.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace framefx {

void FunctioningRule::validate() const {
    if (replaced_variable_ids.size() < 2) throw FunctioningError("functioning rule must replace at least 2 variables");
    if (heights.size() != replaced_variable_ids.size())
        throw FunctioningError("functioning rule needs one height per replaced variable");
    if (heights.front() != 0.0) throw FunctioningError("functioning rule heights must start at 0");
    for (std::size_t i = 1; i < heights.size(); ++i)
        if (!(heights[i] > heights[i - 1]))
            throw FunctioningError("functioning rule heights must be strictly ascending");
}

double alpha_max(double value_min, double value_max, double top_height) {
    if (!(value_min > 0.0) || !(value_min < value_max))
        throw FunctioningError("alpha_max needs 0 < value_min < value_max");
    if (!(top_height > 0.0)) throw FunctioningError("alpha_max needs a positive top height");
    return std::pow(value_max / value_min, 1.0 / top_height);
}

std::vector<double> expand_continuous(double base_value, double alpha, std::span<const double> heights) {
    std::vector<double> out(heights.size());
    for (std::size_t k = 0; k < heights.size(); ++k)
        out[k] = heights[k] == 0.0 ? base_value : base_value / std::pow(alpha, heights[k]);
    return out;
}

std::vector<std::size_t> expand_discrete(std::size_t base_index, double alpha, std::span<const double> heights,
                                         const SectionPool& pool) {
    std::vector<std::size_t> out(heights.size());
    if (heights.empty()) return out;
    const double base_area = pool[base_index].area;
    out[0] = base_index;
    for (std::size_t k = 1; k < heights.size(); ++k) {
        const double target = base_area / std::pow(alpha, heights[k]);
        out[k] = pool.index_of_nearest_area(target, pool[out[k - 1]].area);
    }
    return out;
}

void validate_rules(std::span<const FunctioningRule> rules, std::size_t n) {
    std::set<std::size_t> seen;
    for (std::size_t r = 0; r < rules.size(); ++r) {
        rules[r].validate();
        for (std::size_t id : rules[r].replaced_variable_ids) {
            if (id >= n)
                throw FunctioningError("functioning rule " + std::to_string(r) + " references variable " +
                                       std::to_string(id) + " but the problem has " + std::to_string(n));
            if (!seen.insert(id).second)
                throw FunctioningError("functioning rules overlap on variable " + std::to_string(id));
        }
    }
}

std::size_t reduced_dimension(std::span<const FunctioningRule> rules, std::size_t n) {
    validate_rules(rules, n);
    std::size_t removed = 0;
    for (const auto& r : rules) removed += r.replaced_count() - FunctioningRule::reduced_parameter_count;
    return n - removed;
}

AlphaBounds alpha_bounds(const VariableDomain& domain, const FunctioningRule& rule) {
    AlphaBounds b;
    if (domain.is_index())
        b.upper = alpha_max(domain.pool->min_area(), domain.pool->max_area(), rule.top_height());
    else
        b.upper = alpha_max(domain.lower, domain.upper, rule.top_height());
    return b;
}

ReducedProblem::ReducedProblem(ProblemPtr full, std::vector<FunctioningRule> rules)
    : full_(std::move(full)), rules_(std::move(rules)) {
    if (!full_) throw FunctioningError("reduced problem needs an underlying problem");
    const auto& fd = full_->domains();
    validate_rules(rules_, fd.size());

    std::vector<bool> replaced(fd.size(), false);
    for (const auto& r : rules_)
        for (std::size_t id : r.replaced_variable_ids) replaced[id] = true;
    for (std::size_t i = 0; i < fd.size(); ++i)
        if (!replaced[i]) {
            free_ids_.push_back(i);
            domains_.push_back(fd[i]);
        }

    for (std::size_t r = 0; r < rules_.size(); ++r) {
        const auto& rule = rules_[r];
        const auto& base = fd[rule.replaced_variable_ids.front()];
        for (std::size_t id : rule.replaced_variable_ids) {
            const auto& d = fd[id];
            const bool same = d.kind == base.kind &&
                              (d.is_index() ? d.pool == base.pool : (d.lower == base.lower && d.upper == base.upper));
            if (!same)
                throw FunctioningError("functioning rule " + std::to_string(r) +
                                       " mixes variables with different domains");
        }
        const AlphaBounds ab = alpha_bounds(base, rule);
        domains_.push_back(base);
        domains_.push_back(VariableDomain::continuous(ab.lower, ab.upper));
    }
}

std::string ReducedProblem::name() const { return full_->name() + "+fx"; }

std::vector<double> ReducedProblem::expand(std::span<const double> reduced) const {
    if (reduced.size() != domains_.size())
        throw std::invalid_argument("reduced vector has " + std::to_string(reduced.size()) + " entries, expected " +
                                    std::to_string(domains_.size()));
    const auto& fd = full_->domains();
    std::vector<double> full(fd.size(), 0.0);
    for (std::size_t i = 0; i < free_ids_.size(); ++i) {
        const auto& d = fd[free_ids_[i]];
        full[free_ids_[i]] = d.is_index() ? static_cast<double>(snap_index(d, reduced[i]))
                                          : std::clamp(reduced[i], d.lower, d.upper);
    }
    std::size_t pos = free_ids_.size();
    for (const auto& rule : rules_) {
        const auto& base_domain = fd[rule.replaced_variable_ids.front()];
        const auto& alpha_domain = domains_[pos + 1];
        const double alpha = std::clamp(reduced[pos + 1], alpha_domain.lower, alpha_domain.upper);
        if (base_domain.is_index()) {
            const auto idx = expand_discrete(snap_index(base_domain, reduced[pos]), alpha, rule.heights,
                                             *base_domain.pool);
            for (std::size_t k = 0; k < idx.size(); ++k)
                full[rule.replaced_variable_ids[k]] = static_cast<double>(idx[k]);
        } else {
            const double base = std::clamp(reduced[pos], base_domain.lower, base_domain.upper);
            const auto values = expand_continuous(base, alpha, rule.heights);
            for (std::size_t k = 0; k < values.size(); ++k)
                full[rule.replaced_variable_ids[k]] = std::clamp(values[k], base_domain.lower, base_domain.upper);
        }
        pos += FunctioningRule::reduced_parameter_count;
    }
    return full;
}

Evaluation ReducedProblem::evaluate(std::span<const double> x) const {
    const auto full = expand(x);
    return full_->evaluate(full);
}

std::vector<double> ReducedProblem::full_design(std::span<const double> x) const {
    const auto full = expand(x);
    return full_->full_design(full);
}

std::shared_ptr<const ReducedProblem> wrap_objective(ProblemPtr problem, std::vector<FunctioningRule> rules) {
    return std::make_shared<const ReducedProblem>(std::move(problem), std::move(rules));
}

}  // namespace framefx
