#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "framefx/frame_config.hpp"
#include "framefx/problem.hpp"

namespace framefx {

/// One or more members share a group; a group takes one pool index.
class FrameProblem final : public Problem {
public:
    explicit FrameProblem(std::shared_ptr<const FrameConfig> config);

    std::string name() const override { return config_->name; }
    const std::vector<VariableDomain>& domains() const override { return domains_; }
    std::size_t constraint_count() const override { return constraint_count_; }
    Evaluation evaluate(std::span<const double> x) const override;
    std::vector<ColumnStack> column_stacks() const override { return config_->column_stacks; }

    const FrameConfig& config() const { return *config_; }

    /// Section per group for a design vector (indices snapped).
    std::vector<SectionShape> assignment(std::span<const double> x) const;

    /// All groups at their pool's largest (or smallest) shape.
    std::vector<double> extreme_design(bool largest) const;

private:
    std::shared_ptr<const FrameConfig> config_;
    std::vector<VariableDomain> domains_;
    std::size_t constraint_count_ = 0;
};

/// Continuous relaxation: each group takes an area in [min, max] of its pool
/// and the remaining properties are interpolated linearly in area between the
/// neighboring catalog shapes.
class FrameRelaxation final : public Problem {
public:
    explicit FrameRelaxation(std::shared_ptr<const FrameConfig> config);

    std::string name() const override { return config_->name + "-relaxed"; }
    const std::vector<VariableDomain>& domains() const override { return domains_; }
    std::size_t constraint_count() const override { return constraint_count_; }
    Evaluation evaluate(std::span<const double> x) const override;

    std::vector<SectionShape> assignment(std::span<const double> x) const;

private:
    std::shared_ptr<const FrameConfig> config_;
    std::vector<VariableDomain> domains_;
    std::size_t constraint_count_ = 0;
};

/// Shape with the given area interpolated between neighbors in `pool`.
SectionShape interpolate_shape(const SectionPool& pool, double area);

/// Weight and constraint values of one section assignment.
Evaluation evaluate_frame(const FrameConfig& config, std::span<const SectionShape> assignment);

std::shared_ptr<const FrameProblem> frame_problem(const std::filesystem::path& config_path);

}  // namespace framefx
