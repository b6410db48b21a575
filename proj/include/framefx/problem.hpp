#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "framefx/evaluate.hpp"
#include "framefx/sections.hpp"

namespace framefx {

enum class DomainKind { continuous, index };

/// Domain of one decision variable. Index variables range over pool positions
/// [0, size-1]; optimizers search them as continuous values and problems round
/// to the nearest valid index at evaluation time.
struct VariableDomain {
    DomainKind kind = DomainKind::continuous;
    double lower = 0.0;
    double upper = 1.0;
    std::shared_ptr<const SectionPool> pool;

    static VariableDomain continuous(double lower, double upper);
    static VariableDomain index(std::shared_ptr<const SectionPool> pool);

    double width() const { return upper - lower; }
    bool is_index() const { return kind == DomainKind::index; }
};

std::size_t snap_index(const VariableDomain& d, double value);

/// Rounds index variables and clamps every component into its domain.
std::vector<double> snap_to_domains(std::span<const VariableDomain> domains, std::span<const double> x);

/// Variables that form one vertical column line, lowest first.
struct ColumnStack {
    std::string name;
    std::vector<std::size_t> variables;
    std::vector<double> heights;  // cm above the base
};

/// Uniform problem contract consumed by the optimizers and the harness.
/// Implementations are immutable and evaluate() is safe to call concurrently.
class Problem {
public:
    virtual ~Problem() = default;

    virtual std::string name() const = 0;
    virtual const std::vector<VariableDomain>& domains() const = 0;
    std::size_t dimension() const { return domains().size(); }
    virtual std::size_t constraint_count() const = 0;

    /// Scores a (possibly relaxed) design. The normalized violation of the
    /// result is the raw positive-part sum; optimizers rescale it.
    virtual Evaluation evaluate(std::span<const double> x) const = 0;

    /// The full-space design this point stands for, with indices snapped.
    virtual std::vector<double> full_design(std::span<const double> x) const;

    /// Problem that full_design() vectors belong to.
    virtual const Problem& full_problem() const { return *this; }

    /// Cross-section area per variable of a full design, cm^2.
    virtual std::vector<double> design_areas(std::span<const double> full) const;

    virtual std::vector<ColumnStack> column_stacks() const { return {}; }
};

using ProblemPtr = std::shared_ptr<const Problem>;

/// Separable test problem sum(x_i^2) on [lower, upper]^n, unconstrained.
class SphereProblem final : public Problem {
public:
    SphereProblem(std::size_t n, double lower = -5.0, double upper = 5.0);
    std::string name() const override { return "sphere"; }
    const std::vector<VariableDomain>& domains() const override { return domains_; }
    std::size_t constraint_count() const override { return 0; }
    Evaluation evaluate(std::span<const double> x) const override;

private:
    std::vector<VariableDomain> domains_;
};

}  // namespace framefx
