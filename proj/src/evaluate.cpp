#include "framefx/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace framefx {

namespace {

constexpr double kFixedBaseG = 1.0;
constexpr double kPinnedBaseG = 10.0;

/// Stiffness ratio G at every node for the sway K approximation.
std::vector<double> joint_stiffness_ratios(const FrameModel& model, std::span<const SectionShape> assignment) {
    const std::size_t n = model.nodes.size();
    std::vector<double> columns(n, 0.0);
    std::vector<double> beams(n, 0.0);
    for (std::size_t i = 0; i < model.members.size(); ++i) {
        const auto& m = model.members[i];
        const double r = model.elastic_modulus * assignment[m.group].moment_of_inertia_x / model.member_length(i);
        auto& bucket = model.group_roles[m.group] == MemberRole::column ? columns : beams;
        bucket[m.node_a] += r;
        bucket[m.node_b] += r;
    }
    std::vector<double> g(n, kPinnedBaseG);
    for (std::size_t i = 0; i < n; ++i)
        if (beams[i] > 0.0) g[i] = columns[i] / beams[i];
    for (const auto& s : model.supports) g[s.node] = s.rot ? kFixedBaseG : kPinnedBaseG;
    return g;
}

}  // namespace

void ConstraintSet::validate() const {
    if (!stress_active() && !lrfd && !lateral_drift_active() && !interstory_active())
        throw std::invalid_argument("constraint set has no active family");
    if (stress_allowable && !(*stress_allowable > 0.0))
        throw std::invalid_argument("allowable stress must be positive");
    if (drift_index && !(*drift_index > 0.0)) throw std::invalid_argument("drift index R must be positive");
    if (roof_drift_limit && !(*roof_drift_limit > 0.0))
        throw std::invalid_argument("roof drift limit must be positive");
    if (interstory_index && !(*interstory_index > 0.0))
        throw std::invalid_argument("inter-story drift index must be positive");
    for (double k : group_k)
        if (!(k > 0.0)) throw std::invalid_argument("effective length factors must be positive");
}

std::size_t ConstraintSet::count(const FrameModel& model) const {
    std::size_t c = 0;
    if (stress_active()) c += model.members.size();
    if (lateral_drift_active()) c += 1;
    if (interstory_active()) c += model.story_levels.size();
    if (lrfd) c += model.members.size();
    return c;
}

std::vector<std::string> ConstraintSet::labels(const FrameModel& model) const {
    std::vector<std::string> out;
    if (stress_active())
        for (std::size_t i = 0; i < model.members.size(); ++i) out.push_back("stress[" + std::to_string(i) + "]");
    if (lateral_drift_active()) out.emplace_back("lateral_drift");
    if (interstory_active())
        for (std::size_t j = 0; j < model.story_levels.size(); ++j)
            out.push_back("interstory_drift[" + std::to_string(j) + "]");
    if (lrfd)
        for (std::size_t i = 0; i < model.members.size(); ++i) out.push_back("lrfd[" + std::to_string(i) + "]");
    return out;
}

Evaluation make_evaluation(double objective, std::vector<double> violations) {
    Evaluation e;
    e.objective = objective;
    double sum = 0.0;
    for (double g : violations)
        if (g > 0.0) sum += g;
    e.violations = std::move(violations);
    e.feasible = sum == 0.0;
    e.normalized_violation = sum;
    return e;
}

std::vector<double> constraint_values(const FrameModel& model, std::span<const SectionShape> assignment,
                                      const AnalysisResult& result, const ConstraintSet& cs) {
    std::vector<double> g;
    g.reserve(cs.count(model));

    if (cs.stress_active()) {
        const auto stress = member_max_stress(model, assignment, result);
        for (double s : stress) g.push_back(std::abs(s / *cs.stress_allowable) - 1.0);
    }

    if (cs.lateral_drift_active()) {
        if (cs.roof_drift_limit) {
            g.push_back(result.max_lateral_displacement - *cs.roof_drift_limit);
        } else {
            const double height =
                std::accumulate(result.story_heights.begin(), result.story_heights.end(), 0.0);
            g.push_back(result.max_lateral_displacement / height - *cs.drift_index);
        }
    }

    if (cs.interstory_active()) {
        for (std::size_t j = 0; j < result.story_drifts.size(); ++j)
            g.push_back(result.story_drifts[j] / result.story_heights[j] - *cs.interstory_index);
    }

    if (cs.lrfd) {
        std::vector<double> joint_g;
        if (cs.k_policy == KPolicy::sway) joint_g = joint_stiffness_ratios(model, assignment);
        for (std::size_t i = 0; i < model.members.size(); ++i) {
            const auto& m = model.members[i];
            const SectionShape& s = assignment[m.group];
            const auto& ef = result.member_forces[i];
            const double length = model.member_length(i);
            const double mu = std::max(std::abs(ef.moment_a), std::abs(ef.moment_b));
            double k = cs.group_k.empty() ? 1.0 : cs.group_k[m.group];
            if (cs.k_policy == KPolicy::sway && model.group_roles[m.group] == MemberRole::column)
                k = sway_effective_length(joint_g[m.node_a], joint_g[m.node_b]);
            const LrfdStrengths n = lrfd_strengths(s, length, k, model.elastic_modulus, model.yield_stress);
            const double flexure_ratio = mu / (kPhiFlexure * n.flexure);
            if (model.group_roles[m.group] == MemberRole::column) {
                const double pu = std::abs(ef.axial);
                const double capacity =
                    ef.axial < 0.0 ? kPhiCompression * n.compression : kPhiTension * n.tension;
                g.push_back(lrfd_interaction(pu / capacity, flexure_ratio));
            } else {
                g.push_back(flexure_ratio - 1.0);
            }
        }
    }
    return g;
}

double column_slenderness(const SectionShape& shape, double length, double k, double e, double fy) {
    return k * length / (shape.min_radius_of_gyration() * std::numbers::pi) * std::sqrt(fy / e);
}

double column_curve_ratio(double slenderness) {
    const double l2 = slenderness * slenderness;
    if (slenderness <= 1.5) return std::pow(0.658, l2);
    return 0.877 / l2;
}

LrfdStrengths lrfd_strengths(const SectionShape& shape, double length, double k, double e, double fy) {
    const double lambda = column_slenderness(shape, length, k, e, fy);
    LrfdStrengths out;
    out.compression = shape.area * column_curve_ratio(lambda) * fy;
    out.tension = shape.area * fy;
    out.flexure = shape.plastic_modulus_x * fy;
    return out;
}

double lrfd_interaction(double axial_ratio, double flexure_ratio) {
    if (axial_ratio < 0.2) return axial_ratio / 2.0 + flexure_ratio - 1.0;
    return axial_ratio + 8.0 / 9.0 * flexure_ratio - 1.0;
}

double sway_effective_length(double g_a, double g_b) {
    return std::sqrt((1.6 * g_a * g_b + 4.0 * (g_a + g_b) + 7.5) / (g_a + g_b + 7.5));
}

void ViolationScale::merge(std::span<const double> g) {
    if (gmax_.size() < g.size()) gmax_.resize(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i] > gmax_[i]) gmax_[i] = g[i];
}

double ViolationScale::normalize(std::span<const double> g) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] <= 0.0) continue;
        // An unmerged violation acts as its own maximum.
        const double denom = (i < gmax_.size() && gmax_[i] > 0.0) ? gmax_[i] : g[i];
        sum += g[i] / denom;
    }
    return sum;
}

double normalized_violation(std::span<const double> g, ViolationScale& scale) {
    scale.merge(g);
    return scale.normalize(g);
}

double penalized_fitness(double objective, double normalized_violation, double f_max_feasible) {
    if (normalized_violation <= 0.0) return objective;
    return f_max_feasible + normalized_violation;
}

Preference deb_compare(const Evaluation& a, const Evaluation& b) {
    if (a.feasible && b.feasible) return b.objective < a.objective ? Preference::second : Preference::first;
    if (a.feasible != b.feasible) return a.feasible ? Preference::first : Preference::second;
    return b.normalized_violation < a.normalized_violation ? Preference::second : Preference::first;
}

}  // namespace framefx
