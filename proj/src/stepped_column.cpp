#include "framefx/stepped_column.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace framefx {

void SteppedColumnSpec::validate() const {
    if (segment_count < 1) throw std::invalid_argument("stepped column needs at least one segment");
    if (!(segment_length > 0.0) || !(tip_load > 0.0) || !(density > 0.0) || !(allowable_stress > 0.0))
        throw std::invalid_argument("stepped column constants must be positive");
    if (catalog_radii.empty() && !(radius_min > 0.0 && radius_min < radius_max))
        throw std::invalid_argument("stepped column needs 0 < radius_min < radius_max");
    for (double r : catalog_radii)
        if (!(r > 0.0)) throw std::invalid_argument("catalog radii must be positive");
}

SteppedColumnProblem::SteppedColumnProblem(SteppedColumnSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    if (discrete()) {
        std::vector<SectionShape> shapes;
        for (double r : spec_.catalog_radii) shapes.push_back(circular_properties(r));
        pool_ = std::make_shared<const SectionPool>(std::move(shapes), "circular");
        domains_.assign(spec_.segment_count, VariableDomain::index(pool_));
    } else {
        domains_.assign(spec_.segment_count, VariableDomain::continuous(spec_.radius_min, spec_.radius_max));
    }
}

std::string SteppedColumnProblem::name() const {
    return "stepped-column-" + std::to_string(spec_.segment_count);
}

double SteppedColumnProblem::segment_moment(std::size_t k) const {
    return spec_.tip_load * spec_.segment_length * static_cast<double>(spec_.segment_count - k);
}

std::vector<double> SteppedColumnProblem::radii(std::span<const double> x) const {
    if (x.size() != spec_.segment_count)
        throw std::invalid_argument("stepped column design has " + std::to_string(x.size()) + " entries, expected " +
                                    std::to_string(spec_.segment_count));
    std::vector<double> r(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        r[k] = discrete() ? (*pool_)[snap_index(domains_[k], x[k])].depth / 2.0 : x[k];
    return r;
}

Evaluation SteppedColumnProblem::evaluate(std::span<const double> x) const {
    const auto r = radii(x);
    const double pi = std::numbers::pi;
    double area_sum = 0.0;
    std::vector<double> g(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
        area_sum += pi * r[k] * r[k];
        const double stress = 4.0 * segment_moment(k) / (pi * r[k] * r[k] * r[k]);
        g[k] = stress - spec_.allowable_stress;
    }
    return make_evaluation(spec_.density * spec_.segment_length * area_sum, std::move(g));
}

std::vector<double> SteppedColumnProblem::design_areas(std::span<const double> full) const {
    const auto r = radii(full);
    std::vector<double> a(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) a[k] = std::numbers::pi * r[k] * r[k];
    return a;
}

FunctioningRule SteppedColumnProblem::default_rule() const {
    FunctioningRule rule;
    for (std::size_t k = 0; k < spec_.segment_count; ++k) {
        rule.replaced_variable_ids.push_back(k);
        rule.heights.push_back(static_cast<double>(k) * spec_.segment_length);
    }
    return rule;
}

std::vector<ColumnStack> SteppedColumnProblem::column_stacks() const {
    const auto rule = default_rule();
    return {ColumnStack{"column", rule.replaced_variable_ids, rule.heights}};
}

std::shared_ptr<const SteppedColumnProblem> stepped_column_problem(SteppedColumnSpec spec) {
    return std::make_shared<const SteppedColumnProblem>(std::move(spec));
}

}  // namespace framefx
