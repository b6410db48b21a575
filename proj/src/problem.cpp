#include "framefx/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace framefx {

VariableDomain VariableDomain::continuous(double lower, double upper) {
    if (!(lower < upper)) throw std::invalid_argument("continuous domain needs lower < upper");
    VariableDomain d;
    d.kind = DomainKind::continuous;
    d.lower = lower;
    d.upper = upper;
    return d;
}

VariableDomain VariableDomain::index(std::shared_ptr<const SectionPool> pool) {
    if (!pool) throw std::invalid_argument("index domain needs a section pool");
    VariableDomain d;
    d.kind = DomainKind::index;
    d.lower = 0.0;
    d.upper = static_cast<double>(pool->size() - 1);
    d.pool = std::move(pool);
    return d;
}

std::size_t snap_index(const VariableDomain& d, double value) {
    const double clamped = std::clamp(value, d.lower, d.upper);
    return static_cast<std::size_t>(std::lround(clamped));
}

std::vector<double> snap_to_domains(std::span<const VariableDomain> domains, std::span<const double> x) {
    if (x.size() != domains.size())
        throw std::invalid_argument("design vector has " + std::to_string(x.size()) + " entries, expected " +
                                    std::to_string(domains.size()));
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto& d = domains[i];
        out[i] = d.is_index() ? static_cast<double>(snap_index(d, x[i])) : std::clamp(x[i], d.lower, d.upper);
    }
    return out;
}

std::vector<double> Problem::full_design(std::span<const double> x) const {
    return snap_to_domains(domains(), x);
}

std::vector<double> Problem::design_areas(std::span<const double> full) const {
    const auto& d = domains();
    std::vector<double> areas(full.size());
    for (std::size_t i = 0; i < full.size(); ++i)
        areas[i] = d[i].is_index() ? (*d[i].pool)[snap_index(d[i], full[i])].area : full[i];
    return areas;
}

SphereProblem::SphereProblem(std::size_t n, double lower, double upper) {
    if (n == 0) throw std::invalid_argument("sphere dimension must be positive");
    domains_.assign(n, VariableDomain::continuous(lower, upper));
}

Evaluation SphereProblem::evaluate(std::span<const double> x) const {
    double s = 0.0;
    for (double v : x) s += v * v;
    return make_evaluation(s, {});
}

}  // namespace framefx
