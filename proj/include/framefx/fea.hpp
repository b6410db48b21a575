#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "framefx/sections.hpp"

namespace framefx {

enum class MemberRole { beam, column };

struct Node {
    double x = 0.0;  // cm
    double y = 0.0;  // cm
};

struct Member {
    std::size_t node_a = 0;
    std::size_t node_b = 0;
    std::size_t group = 0;
};

struct Support {
    std::size_t node = 0;
    bool ux = false;
    bool uy = false;
    bool rot = false;
};

struct NodalLoad {
    std::size_t node = 0;
    double fx = 0.0;      // kN
    double fy = 0.0;      // kN
    double moment = 0.0;  // kN*cm
};

/// Uniform load perpendicular to the member axis, in the member's local y
/// direction (kN/cm). For a beam drawn left to right, negative is downward.
struct MemberLoad {
    std::size_t member = 0;
    double transverse = 0.0;
};

/// Planar frame: geometry, supports, loads and member groups. Units are kN and cm
/// throughout; stresses and moduli in kN/cm^2, density in kg/cm^3.
struct FrameModel {
    std::vector<Node> nodes;
    std::vector<Member> members;
    std::vector<Support> supports;
    std::vector<NodalLoad> loads;
    std::vector<MemberLoad> member_loads;
    std::vector<MemberRole> group_roles;
    std::vector<double> story_levels;
    double elastic_modulus = 20000.0;
    double yield_stress = 24.82;
    double density = 0.00785;

    std::size_t group_count() const { return group_roles.size(); }
    std::size_t dof_count() const { return 3 * nodes.size(); }
    double member_length(std::size_t m) const;

    /// Index checks, positive lengths, ascending story levels. Stability is
    /// only detected by analyze().
    void validate() const;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when constraint elimination leaves a singular stiffness matrix.
class SingularStiffnessError : public std::runtime_error {
public:
    SingularStiffnessError(std::size_t node, int dof, const std::string& what)
        : std::runtime_error(what), node_(node), dof_(dof) {}
    std::size_t node() const { return node_; }
    /// 0 = ux, 1 = uy, 2 = rot
    int dof() const { return dof_; }

private:
    std::size_t node_;
    int dof_;
};

/// Local end forces of one member. Axial force is tension-positive; shears and
/// moments follow the local stiffness sign convention at each end.
struct MemberEndForces {
    double axial = 0.0;
    double shear_a = 0.0;
    double moment_a = 0.0;
    double shear_b = 0.0;
    double moment_b = 0.0;
};

struct AnalysisResult {
    std::vector<std::array<double, 3>> displacements;  // per node: ux, uy, rot
    std::vector<MemberEndForces> member_forces;
    std::vector<double> reactions;  // global DOF vector; zero at free DOFs
    double max_lateral_displacement = 0.0;
    std::vector<double> story_drifts;   // cm, one per story level
    std::vector<double> story_heights;  // cm, matching story_drifts
};

/// Global stiffness matrix (all DOFs, before constraints) for a section assignment.
Eigen::MatrixXd assemble_stiffness(const FrameModel& model, std::span<const SectionShape> assignment);

/// Global load vector including equivalent nodal loads of member loads.
Eigen::VectorXd assemble_loads(const FrameModel& model);

/// First-order linear elastic analysis by the direct stiffness method.
AnalysisResult analyze(const FrameModel& model, std::span<const SectionShape> assignment);

/// |N|/A + max(|M_a|, |M_b|)/S_x per member, kN/cm^2.
std::vector<double> member_max_stress(const FrameModel& model,
                                      std::span<const SectionShape> assignment,
                                      const AnalysisResult& result);

/// Total steel weight in kg.
double frame_weight(const FrameModel& model, std::span<const SectionShape> assignment);

}  // namespace framefx
