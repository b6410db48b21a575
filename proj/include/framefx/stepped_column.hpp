#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "framefx/fx.hpp"
#include "framefx/problem.hpp"

namespace framefx {

/// Cantilever of N stacked circular segments under a lateral tip load.
/// Segment 0 is at the base.
struct SteppedColumnSpec {
    std::size_t segment_count = 50;
    double segment_length = 10.0;     // cm
    double tip_load = 10.0;           // kN
    double density = 0.00785;         // kg/cm^3
    double allowable_stress = 16.0;   // kN/cm^2
    double radius_min = 3.0;          // cm
    double radius_max = 50.0;         // cm
    /// When non-empty, segments pick from these radii instead of the
    /// continuous [radius_min, radius_max] interval.
    std::vector<double> catalog_radii;

    void validate() const;
};

/// Weight rho L sum(pi r_i^2) subject to bottom-of-segment bending stress
/// sigma_i - sigma_a <= 0 with sigma_i = 4 M_i / (pi r_i^3).
class SteppedColumnProblem final : public Problem {
public:
    explicit SteppedColumnProblem(SteppedColumnSpec spec);

    std::string name() const override;
    const std::vector<VariableDomain>& domains() const override { return domains_; }
    std::size_t constraint_count() const override { return spec_.segment_count; }
    Evaluation evaluate(std::span<const double> x) const override;
    std::vector<double> design_areas(std::span<const double> full) const override;
    std::vector<ColumnStack> column_stacks() const override;

    const SteppedColumnSpec& spec() const { return spec_; }
    bool discrete() const { return !spec_.catalog_radii.empty(); }

    /// Bending moment at the bottom of segment k (0 = base), kN*cm.
    double segment_moment(std::size_t k) const;

    /// Radius of each segment for a design vector.
    std::vector<double> radii(std::span<const double> x) const;

    /// One rule over all segments with heights k * L.
    FunctioningRule default_rule() const;

private:
    SteppedColumnSpec spec_;
    std::vector<VariableDomain> domains_;
    std::shared_ptr<const SectionPool> pool_;
};

std::shared_ptr<const SteppedColumnProblem> stepped_column_problem(SteppedColumnSpec spec = {});

}  // namespace framefx
