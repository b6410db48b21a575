#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "framefx/fea.hpp"
#include "framefx/sections.hpp"

namespace framefx {

/// How effective length factors of columns are obtained.
enum class KPolicy {
    fixed,  // per-group value from the config (default 1.0)
    sway,   // sway-frame approximation from joint stiffness ratios
};

/// Active constraint families and their limits. A family is active when its
/// limit is set (or, for LRFD, when the flag is on).
struct ConstraintSet {
    std::optional<double> stress_allowable;       // kN/cm^2
    bool lrfd = false;
    std::optional<double> drift_index;            // R, dimensionless
    std::optional<double> roof_drift_limit;       // cm; replaces drift_index when set
    std::optional<double> interstory_index;       // R_I, dimensionless
    KPolicy k_policy = KPolicy::fixed;
    std::vector<double> group_k;                  // per group; empty => 1.0 everywhere

    bool stress_active() const { return stress_allowable.has_value(); }
    bool lateral_drift_active() const { return drift_index.has_value() || roof_drift_limit.has_value(); }
    bool interstory_active() const { return interstory_index.has_value(); }

    /// Throws std::invalid_argument when no family is active or a limit is not positive.
    void validate() const;

    /// Number of g values constraint_values() emits for a model.
    std::size_t count(const FrameModel& model) const;

    /// Labels in the same order as constraint_values().
    std::vector<std::string> labels(const FrameModel& model) const;
};

/// One scored candidate. `violations` are g_i values with g_i <= 0 feasible.
struct Evaluation {
    double objective = 0.0;
    std::vector<double> violations;
    double normalized_violation = 0.0;
    bool feasible = true;
};

/// Sets `feasible` from the violations and `normalized_violation` to the raw
/// sum of positive parts (an optimizer rescales it with a ViolationScale).
Evaluation make_evaluation(double objective, std::vector<double> violations);

/// Stress, drift, inter-story drift and LRFD interaction g values, in that
/// family order; positive means violated.
std::vector<double> constraint_values(const FrameModel& model, std::span<const SectionShape> assignment,
                                      const AnalysisResult& result, const ConstraintSet& cs);

struct LrfdStrengths {
    double compression = 0.0;  // P_n, kN
    double tension = 0.0;      // P_n, kN
    double flexure = 0.0;      // M_n, kN*cm
};

inline constexpr double kPhiCompression = 0.85;
inline constexpr double kPhiTension = 0.9;
inline constexpr double kPhiFlexure = 0.9;

/// Slenderness parameter lambda_c = K L / (r_min pi) * sqrt(Fy / E).
double column_slenderness(const SectionShape& shape, double length, double k, double e, double fy);

/// Critical stress ratio F_cr / Fy of the column curve:
/// 0.658^(lambda_c^2) for lambda_c <= 1.5, otherwise 0.877 / lambda_c^2.
double column_curve_ratio(double slenderness);

LrfdStrengths lrfd_strengths(const SectionShape& shape, double length, double k, double e, double fy);

/// H1-1a/b interaction value minus one for in-plane bending only.
///   axial_ratio   = P_u / (phi_c P_n)
///   flexure_ratio = M_ux / (phi_b M_nx)
double lrfd_interaction(double axial_ratio, double flexure_ratio);

/// Effective length factor of a sway column from joint stiffness ratios G_A, G_B.
double sway_effective_length(double g_a, double g_b);

/// Running per-constraint maximum violation used to normalize G.
class ViolationScale {
public:
    ViolationScale() = default;
    explicit ViolationScale(std::size_t constraint_count) : gmax_(constraint_count, 0.0) {}

    /// Elementwise max with the positive parts of g.
    void merge(std::span<const double> g);

    /// G = sum_i max(g_i, 0) / gmax_i. A violation with no recorded maximum
    /// counts as its own maximum (contributes 1).
    double normalize(std::span<const double> g) const;

    std::span<const double> maxima() const { return gmax_; }

private:
    std::vector<double> gmax_;
};

/// Merge-then-normalize for a single evaluation.
double normalized_violation(std::span<const double> g, ViolationScale& scale);

/// Feasible (G == 0): the objective; otherwise f_max_feasible + G.
double penalized_fitness(double objective, double normalized_violation, double f_max_feasible);

enum class Preference { first, second };

/// Feasibility-rule comparison. Ties keep the first argument (the incumbent).
Preference deb_compare(const Evaluation& a, const Evaluation& b);

/// True when `challenger` strictly wins against `incumbent`.
inline bool deb_better(const Evaluation& challenger, const Evaluation& incumbent) {
    return deb_compare(incumbent, challenger) == Preference::second;
}

}  // namespace framefx
