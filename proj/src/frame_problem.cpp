#include "framefx/frame_problem.hpp"

#include <algorithm>

namespace framefx {

Evaluation evaluate_frame(const FrameConfig& config, std::span<const SectionShape> assignment) {
    const AnalysisResult result = analyze(config.model, assignment);
    auto g = constraint_values(config.model, assignment, result, config.constraints);
    return make_evaluation(frame_weight(config.model, assignment), std::move(g));
}

FrameProblem::FrameProblem(std::shared_ptr<const FrameConfig> config) : config_(std::move(config)) {
    if (!config_) throw std::invalid_argument("frame problem needs a config");
    for (const auto& pool : config_->group_pools) domains_.push_back(VariableDomain::index(pool));
    constraint_count_ = config_->constraints.count(config_->model);
}

std::vector<SectionShape> FrameProblem::assignment(std::span<const double> x) const {
    if (x.size() != domains_.size())
        throw std::invalid_argument("frame design has " + std::to_string(x.size()) + " entries, expected " +
                                    std::to_string(domains_.size()));
    std::vector<SectionShape> shapes;
    shapes.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) shapes.push_back((*domains_[i].pool)[snap_index(domains_[i], x[i])]);
    return shapes;
}

Evaluation FrameProblem::evaluate(std::span<const double> x) const {
    const auto shapes = assignment(x);
    return evaluate_frame(*config_, shapes);
}

std::vector<double> FrameProblem::extreme_design(bool largest) const {
    std::vector<double> x(domains_.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = largest ? domains_[i].upper : domains_[i].lower;
    return x;
}

SectionShape interpolate_shape(const SectionPool& pool, double area) {
    const auto& s = pool.shapes();
    if (area <= s.front().area) return s.front();
    if (area >= s.back().area) return s.back();
    auto hi = std::lower_bound(s.begin(), s.end(), area, [](const SectionShape& a, double v) { return a.area < v; });
    auto lo = std::prev(hi);
    if (hi->area == lo->area) return *lo;
    const double t = (area - lo->area) / (hi->area - lo->area);
    auto mix = [t](double a, double b) { return a + t * (b - a); };
    SectionShape out;
    out.name = "A" + std::to_string(area);
    out.area = area;
    out.moment_of_inertia_x = mix(lo->moment_of_inertia_x, hi->moment_of_inertia_x);
    out.section_modulus_x = mix(lo->section_modulus_x, hi->section_modulus_x);
    out.plastic_modulus_x = mix(lo->plastic_modulus_x, hi->plastic_modulus_x);
    out.radius_of_gyration_x = mix(lo->radius_of_gyration_x, hi->radius_of_gyration_x);
    out.radius_of_gyration_y = mix(lo->radius_of_gyration_y, hi->radius_of_gyration_y);
    out.depth = mix(lo->depth, hi->depth);
    return out;
}

FrameRelaxation::FrameRelaxation(std::shared_ptr<const FrameConfig> config) : config_(std::move(config)) {
    if (!config_) throw std::invalid_argument("frame relaxation needs a config");
    for (const auto& pool : config_->group_pools)
        domains_.push_back(VariableDomain::continuous(pool->min_area(), pool->max_area()));
    constraint_count_ = config_->constraints.count(config_->model);
}

std::vector<SectionShape> FrameRelaxation::assignment(std::span<const double> x) const {
    if (x.size() != domains_.size())
        throw std::invalid_argument("relaxed frame design has " + std::to_string(x.size()) + " entries, expected " +
                                    std::to_string(domains_.size()));
    std::vector<SectionShape> shapes;
    shapes.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) shapes.push_back(interpolate_shape(*config_->group_pools[i], x[i]));
    return shapes;
}

Evaluation FrameRelaxation::evaluate(std::span<const double> x) const {
    const auto shapes = assignment(x);
    return evaluate_frame(*config_, shapes);
}

std::shared_ptr<const FrameProblem> frame_problem(const std::filesystem::path& config_path) {
    return std::make_shared<const FrameProblem>(std::make_shared<const FrameConfig>(load_frame_config(config_path)));
}

}  // namespace framefx
