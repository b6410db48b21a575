#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "framefx/budget.hpp"
#include "framefx/evaluate.hpp"
#include "framefx/fx.hpp"
#include "framefx/problem.hpp"
#include "framefx/rng.hpp"

namespace framefx {

enum class Algorithm { pso, de };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view text);

struct PsoParams {
    double inertia = 0.7298;
    double cognitive = 1.49618;
    double social = 1.49618;
    double vmax_fraction = 0.5;  // of each domain width
};

struct DeParams {
    double scale = 0.5;      // F
    double crossover = 0.9;  // CR, rand/1/bin
};

struct OptimizerConfig {
    Algorithm algorithm = Algorithm::de;
    std::size_t population_size = 25;
    std::size_t max_fe = 5000;
    std::uint64_t seed = 0;
    PsoParams pso;
    DeParams de;

    /// population_size >= 4, max_fe >= population_size, coefficients in range.
    void validate() const;
};

/// State after one generation. Generation 0 is the initial population.
struct GenerationStats {
    std::size_t generation = 0;
    std::size_t fe_used = 0;
    double best_feasible = 0.0;        // NaN while nothing feasible was seen
    double infeasible_fraction = 0.0;  // over the current population
};

using Observer = std::function<void(const GenerationStats&)>;

struct RunResult {
    std::vector<GenerationStats> history;
    std::vector<double> best_position;  // search-space vector
    Evaluation best_evaluation;         // violation normalized with the final scale
    std::size_t fe_used = 0;
};

/// Uniform sample inside the domains (index variables as continuous values).
std::vector<double> sample_uniform(std::span<const VariableDomain> domains, Rng& rng);

/// Initial positions in the space the optimizer will search.
///   none: uniform over `problem`'s domains.
///   ifx:  uniform over the reduced space of `rules`, expanded to full vectors.
///   fx:   `problem` must already be reduced; uniform over its domains.
std::vector<std::vector<double>> initialize_population(const ProblemPtr& problem, std::size_t size,
                                                       Strategy strategy, std::span<const FunctioningRule> rules,
                                                       Rng& rng);

/// Clamps x into [lower, upper]; a clamped component has its velocity negated.
void apply_velocity_bounds(std::span<double> x, std::span<double> v, std::span<const VariableDomain> domains);

/// Global-best PSO with feasibility-rule best updates. Empty `initial` draws a
/// uniform population from the seed's init stream.
RunResult pso_run(const Problem& problem, const OptimizerConfig& config,
                  std::vector<std::vector<double>> initial = {}, const Observer& observer = {});

/// DE/rand/1/bin with feasibility-rule selection and bound clamping.
RunResult de_run(const Problem& problem, const OptimizerConfig& config,
                 std::vector<std::vector<double>> initial = {}, const Observer& observer = {});

RunResult optimize(const Problem& problem, const OptimizerConfig& config,
                   std::vector<std::vector<double>> initial = {}, const Observer& observer = {});

}  // namespace framefx
