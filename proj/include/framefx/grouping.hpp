#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "framefx/problem.hpp"

namespace framefx {

using ScalarFunction = std::function<double(std::span<const double>)>;

inline constexpr double kDefaultInteractionEta = 1e-10;

struct InteractionMatrix {
    std::size_t n = 0;
    std::vector<double> lambda;    // row-major n x n
    std::vector<bool> adjacency;   // row-major n x n, diagonal true
    std::vector<double> threshold; // row-major n x n, per-pair threshold
    double eta = kDefaultInteractionEta;
    std::size_t fe_cost = 0;

    double at(std::size_t i, std::size_t j) const { return lambda[i * n + j]; }
    bool interacts(std::size_t i, std::size_t j) const { return adjacency[i * n + j]; }
    double threshold_at(std::size_t i, std::size_t j) const { return threshold[i * n + j]; }
    /// Off-diagonal interacting pairs (i < j).
    std::size_t edge_count() const;
};

/// Raised when f fails; carries the probe point.
class InteractionError : public std::runtime_error {
public:
    InteractionError(std::vector<double> point, const std::string& what)
        : std::runtime_error(what), point_(std::move(point)) {}
    const std::vector<double>& point() const { return point_; }

private:
    std::vector<double> point_;
};

/// Pairwise differential-grouping test. The base point is `lower`; variable i
/// is perturbed to the midpoint of its interval. Each distinct point is
/// evaluated once, (n^2 + n + 2) / 2 evaluations in total.
InteractionMatrix interaction_matrix(const ScalarFunction& f, std::span<const double> lower,
                                     std::span<const double> upper, double eta = kDefaultInteractionEta);

/// Weight times (1 + penalty * sum of positive violations), evaluated on a
/// continuous problem. Makes the feasibility structure visible to the test.
ScalarFunction penalized_objective(ProblemPtr problem, double penalty = 1.0);

/// Interaction matrix of a continuous problem through penalized_objective.
InteractionMatrix problem_interactions(ProblemPtr problem, double eta = kDefaultInteractionEta,
                                       double penalty = 1.0);

void write_matrix_csv(const InteractionMatrix& m, std::ostream& out);

/// Grayscale heat map, one square per entry, row 0 at the top. Darker means a
/// larger lambda on a log scale; the diagonal is drawn black.
void write_matrix_svg(const InteractionMatrix& m, std::ostream& out, double cell = 16.0);

/// Writes interactions.csv and interactions.svg into `dir`.
void render_matrix(const InteractionMatrix& m, const std::filesystem::path& dir);

/// Gray level 0..255 for an off-diagonal entry (255 = background).
int matrix_gray_level(const InteractionMatrix& m, std::size_t i, std::size_t j);

}  // namespace framefx
