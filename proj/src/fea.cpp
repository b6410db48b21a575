#include "framefx/fea.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace framefx {

namespace {

using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

constexpr double kPivotTolerance = 1e-10;
const char* const kDofNames[3] = {"ux", "uy", "rot"};

struct Geometry {
    double length;
    double c;
    double s;
};

Geometry member_geometry(const FrameModel& model, const Member& m) {
    const Node& a = model.nodes[m.node_a];
    const Node& b = model.nodes[m.node_b];
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double length = std::hypot(dx, dy);
    return {length, dx / length, dy / length};
}

Matrix6 local_stiffness(double e, double area, double inertia, double length) {
    const double ea = e * area / length;
    const double l2 = length * length;
    const double k12 = 12.0 * e * inertia / (l2 * length);
    const double k6 = 6.0 * e * inertia / l2;
    const double k4 = 4.0 * e * inertia / length;
    const double k2 = 2.0 * e * inertia / length;
    Matrix6 k;
    k <<  ea,   0.0,  0.0, -ea,   0.0,  0.0,
          0.0,  k12,  k6,   0.0, -k12,  k6,
          0.0,  k6,   k4,   0.0, -k6,   k2,
         -ea,   0.0,  0.0,  ea,   0.0,  0.0,
          0.0, -k12, -k6,   0.0,  k12, -k6,
          0.0,  k6,   k2,   0.0, -k6,   k4;
    return k;
}

Matrix6 rotation(const Geometry& g) {
    Matrix6 t = Matrix6::Zero();
    for (int blk = 0; blk < 2; ++blk) {
        const int o = 3 * blk;
        t(o, o) = g.c;
        t(o, o + 1) = g.s;
        t(o + 1, o) = -g.s;
        t(o + 1, o + 1) = g.c;
        t(o + 2, o + 2) = 1.0;
    }
    return t;
}

std::array<std::size_t, 6> member_dofs(const Member& m) {
    const std::size_t a = 3 * m.node_a;
    const std::size_t b = 3 * m.node_b;
    return {a, a + 1, a + 2, b, b + 1, b + 2};
}

/// Local equivalent nodal loads of a uniform transverse load.
Vector6 equivalent_loads(double w, double length) {
    Vector6 q;
    q << 0.0, w * length / 2.0, w * length * length / 12.0, 0.0, w * length / 2.0,
        -w * length * length / 12.0;
    return q;
}

std::vector<double> transverse_load_per_member(const FrameModel& model) {
    std::vector<double> w(model.members.size(), 0.0);
    for (const auto& ml : model.member_loads) w[ml.member] += ml.transverse;
    return w;
}

void check_assignment(const FrameModel& model, std::span<const SectionShape> assignment) {
    if (assignment.size() != model.group_count()) {
        throw ModelError("section assignment has " + std::to_string(assignment.size()) +
                         " entries, model has " + std::to_string(model.group_count()) + " groups");
    }
}

/// Unpivoted elimination used only to locate the pivot that broke the
/// Cholesky factorization.
std::size_t first_bad_pivot(Eigen::MatrixXd k) {
    const auto n = static_cast<std::size_t>(k.rows());
    const double scale = std::max(k.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    for (std::size_t p = 0; p < n; ++p) {
        const auto ip = static_cast<Eigen::Index>(p);
        const double pivot = k(ip, ip);
        if (!(pivot > kPivotTolerance * scale)) return p;
        for (auto i = ip + 1; i < k.rows(); ++i) {
            const double f = k(i, ip) / pivot;
            if (f == 0.0) continue;
            k.row(i).tail(k.rows() - ip) -= f * k.row(ip).tail(k.rows() - ip);
        }
    }
    return n;
}

}  // namespace

double FrameModel::member_length(std::size_t m) const {
    return member_geometry(*this, members.at(m)).length;
}

void FrameModel::validate() const {
    if (nodes.empty()) throw ModelError("frame has no nodes");
    if (members.empty()) throw ModelError("frame has no members");
    if (group_roles.empty()) throw ModelError("frame has no member groups");
    for (std::size_t i = 0; i < members.size(); ++i) {
        const auto& m = members[i];
        if (m.node_a >= nodes.size() || m.node_b >= nodes.size())
            throw ModelError("member " + std::to_string(i) + " references a missing node");
        if (m.group >= group_count())
            throw ModelError("member " + std::to_string(i) + " references missing group " +
                             std::to_string(m.group));
        if (!(member_length(i) > 0.0))
            throw ModelError("member " + std::to_string(i) + " has zero length");
    }
    for (const auto& s : supports)
        if (s.node >= nodes.size()) throw ModelError("support references missing node " + std::to_string(s.node));
    for (const auto& l : loads)
        if (l.node >= nodes.size()) throw ModelError("load references missing node " + std::to_string(l.node));
    for (const auto& l : member_loads)
        if (l.member >= members.size())
            throw ModelError("member load references missing member " + std::to_string(l.member));
    if (story_levels.empty()) throw ModelError("frame has no story levels");
    if (!(story_levels.front() > 0.0)) throw ModelError("first story level must be positive");
    for (std::size_t i = 1; i < story_levels.size(); ++i)
        if (!(story_levels[i] > story_levels[i - 1]))
            throw ModelError("story levels must be strictly ascending");
    for (double level : story_levels) {
        const bool found = std::any_of(nodes.begin(), nodes.end(),
                                       [&](const Node& n) { return std::abs(n.y - level) < 1e-6; });
        if (!found) throw ModelError("no node lies on story level " + std::to_string(level));
    }
    if (!(elastic_modulus > 0.0) || !(yield_stress > 0.0) || !(density > 0.0))
        throw ModelError("material constants must be positive");
}

Eigen::MatrixXd assemble_stiffness(const FrameModel& model, std::span<const SectionShape> assignment) {
    check_assignment(model, assignment);
    const auto n = static_cast<Eigen::Index>(model.dof_count());
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    for (const auto& m : model.members) {
        const Geometry g = member_geometry(model, m);
        const SectionShape& s = assignment[m.group];
        const Matrix6 t = rotation(g);
        const Matrix6 kg = t.transpose() * local_stiffness(model.elastic_modulus, s.area, s.moment_of_inertia_x, g.length) * t;
        const auto dofs = member_dofs(m);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                k(static_cast<Eigen::Index>(dofs[i]), static_cast<Eigen::Index>(dofs[j])) += kg(i, j);
    }
    return k;
}

Eigen::VectorXd assemble_loads(const FrameModel& model) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.dof_count()));
    for (const auto& l : model.loads) {
        const auto base = static_cast<Eigen::Index>(3 * l.node);
        f(base) += l.fx;
        f(base + 1) += l.fy;
        f(base + 2) += l.moment;
    }
    const auto w = transverse_load_per_member(model);
    for (std::size_t i = 0; i < model.members.size(); ++i) {
        if (w[i] == 0.0) continue;
        const auto& m = model.members[i];
        const Geometry g = member_geometry(model, m);
        const Vector6 q = rotation(g).transpose() * equivalent_loads(w[i], g.length);
        const auto dofs = member_dofs(m);
        for (int j = 0; j < 6; ++j) f(static_cast<Eigen::Index>(dofs[j])) += q(j);
    }
    return f;
}

AnalysisResult analyze(const FrameModel& model, std::span<const SectionShape> assignment) {
    check_assignment(model, assignment);
    const std::size_t ndof = model.dof_count();

    std::vector<bool> fixed(ndof, false);
    for (const auto& s : model.supports) {
        if (s.ux) fixed[3 * s.node] = true;
        if (s.uy) fixed[3 * s.node + 1] = true;
        if (s.rot) fixed[3 * s.node + 2] = true;
    }
    std::vector<Eigen::Index> free_dofs;
    free_dofs.reserve(ndof);
    for (std::size_t i = 0; i < ndof; ++i)
        if (!fixed[i]) free_dofs.push_back(static_cast<Eigen::Index>(i));

    const Eigen::MatrixXd k = assemble_stiffness(model, assignment);
    const Eigen::VectorXd f = assemble_loads(model);

    const auto nf = static_cast<Eigen::Index>(free_dofs.size());
    Eigen::MatrixXd kff(nf, nf);
    Eigen::VectorXd ff(nf);
    for (Eigen::Index i = 0; i < nf; ++i) {
        ff(i) = f(free_dofs[i]);
        for (Eigen::Index j = 0; j < nf; ++j) kff(i, j) = k(free_dofs[i], free_dofs[j]);
    }

    auto singular = [&](std::size_t reduced_index) {
        const auto global = static_cast<std::size_t>(free_dofs[static_cast<Eigen::Index>(reduced_index)]);
        const std::size_t node = global / 3;
        const int dof = static_cast<int>(global % 3);
        std::ostringstream msg;
        msg << "singular stiffness matrix: zero pivot at node " << node << " dof " << kDofNames[dof]
            << " (structure is unstable)";
        return SingularStiffnessError(node, dof, msg.str());
    };

    Eigen::VectorXd uf = Eigen::VectorXd::Zero(nf);
    if (nf > 0) {
        Eigen::LLT<Eigen::MatrixXd> llt(kff);
        bool ok = llt.info() == Eigen::Success;
        if (ok) {
            const auto& l = llt.matrixLLT();
            for (Eigen::Index i = 0; i < nf; ++i) {
                const double pivot = l(i, i) * l(i, i);
                if (!(pivot > kPivotTolerance * kff(i, i))) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) {
            const std::size_t bad = first_bad_pivot(kff);
            throw singular(bad < static_cast<std::size_t>(nf) ? bad : 0);
        }
        uf = llt.solve(ff);
    }

    Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ndof));
    for (Eigen::Index i = 0; i < nf; ++i) u(free_dofs[i]) = uf(i);

    AnalysisResult r;
    r.displacements.resize(model.nodes.size());
    for (std::size_t n = 0; n < model.nodes.size(); ++n)
        for (int d = 0; d < 3; ++d) r.displacements[n][d] = u(static_cast<Eigen::Index>(3 * n + d));

    const Eigen::VectorXd residual = k * u - f;
    r.reactions.assign(ndof, 0.0);
    for (std::size_t i = 0; i < ndof; ++i)
        if (fixed[i]) r.reactions[i] = residual(static_cast<Eigen::Index>(i));

    const auto w = transverse_load_per_member(model);
    r.member_forces.reserve(model.members.size());
    for (std::size_t i = 0; i < model.members.size(); ++i) {
        const auto& m = model.members[i];
        const Geometry g = member_geometry(model, m);
        const SectionShape& s = assignment[m.group];
        const auto dofs = member_dofs(m);
        Vector6 ug;
        for (int j = 0; j < 6; ++j) ug(j) = u(static_cast<Eigen::Index>(dofs[j]));
        Vector6 fl = local_stiffness(model.elastic_modulus, s.area, s.moment_of_inertia_x, g.length) *
                     (rotation(g) * ug);
        if (w[i] != 0.0) fl -= equivalent_loads(w[i], g.length);
        MemberEndForces ef;
        ef.axial = -fl(0);
        ef.shear_a = fl(1);
        ef.moment_a = fl(2);
        ef.shear_b = fl(4);
        ef.moment_b = fl(5);
        r.member_forces.push_back(ef);
    }

    double max_ux = 0.0;
    double base_y = model.nodes.front().y;
    for (const auto& n : model.nodes) base_y = std::min(base_y, n.y);
    for (const auto& d : r.displacements) max_ux = std::max(max_ux, std::abs(d[0]));
    r.max_lateral_displacement = max_ux;

    auto level_sway = [&](double level) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t n = 0; n < model.nodes.size(); ++n) {
            if (std::abs(model.nodes[n].y - level) < 1e-6) {
                sum += r.displacements[n][0];
                ++count;
            }
        }
        return count ? sum / static_cast<double>(count) : 0.0;
    };
    double below_level = base_y;
    double below_sway = level_sway(base_y);
    for (double level : model.story_levels) {
        const double sway = level_sway(level);
        r.story_drifts.push_back(std::abs(sway - below_sway));
        r.story_heights.push_back(level - below_level);
        below_sway = sway;
        below_level = level;
    }
    return r;
}

std::vector<double> member_max_stress(const FrameModel& model, std::span<const SectionShape> assignment,
                                      const AnalysisResult& result) {
    check_assignment(model, assignment);
    std::vector<double> stress(model.members.size());
    for (std::size_t i = 0; i < model.members.size(); ++i) {
        const SectionShape& s = assignment[model.members[i].group];
        const auto& ef = result.member_forces.at(i);
        const double moment = std::max(std::abs(ef.moment_a), std::abs(ef.moment_b));
        stress[i] = std::abs(ef.axial) / s.area + moment / s.section_modulus_x;
    }
    return stress;
}

double frame_weight(const FrameModel& model, std::span<const SectionShape> assignment) {
    check_assignment(model, assignment);
    std::vector<double> group_length(model.group_count(), 0.0);
    for (std::size_t i = 0; i < model.members.size(); ++i) group_length[model.members[i].group] += model.member_length(i);
    double w = 0.0;
    for (std::size_t g = 0; g < model.group_count(); ++g) w += model.density * group_length[g] * assignment[g].area;
    return w;
}

}  // namespace framefx
