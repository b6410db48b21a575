#include "framefx/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace framefx {

std::string_view to_string(Algorithm a) { return a == Algorithm::pso ? "pso" : "de"; }

std::optional<Algorithm> parse_algorithm(std::string_view text) {
    if (text == "pso") return Algorithm::pso;
    if (text == "de") return Algorithm::de;
    return std::nullopt;
}

void OptimizerConfig::validate() const {
    if (population_size < 4) throw std::invalid_argument("population size must be at least 4");
    if (max_fe < population_size) throw std::invalid_argument("max_fe must be at least the population size");
    if (!(pso.vmax_fraction > 0.0)) throw std::invalid_argument("PSO vmax fraction must be positive");
    if (!(de.scale > 0.0)) throw std::invalid_argument("DE scale factor must be positive");
    if (!(de.crossover >= 0.0 && de.crossover <= 1.0)) throw std::invalid_argument("DE crossover must be in [0, 1]");
}

std::vector<double> sample_uniform(std::span<const VariableDomain> domains, Rng& rng) {
    std::vector<double> x(domains.size());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = rng.uniform(domains[j].lower, domains[j].upper);
    return x;
}

std::vector<std::vector<double>> initialize_population(const ProblemPtr& problem, std::size_t size,
                                                       Strategy strategy, std::span<const FunctioningRule> rules,
                                                       Rng& rng) {
    if (!problem) throw std::invalid_argument("initialize_population needs a problem");
    std::vector<std::vector<double>> pop;
    pop.reserve(size);
    if (strategy == Strategy::ifx) {
        if (rules.empty()) throw std::invalid_argument("the ifx strategy needs functioning rules");
        const ReducedProblem reduced(problem, std::vector<FunctioningRule>(rules.begin(), rules.end()));
        for (std::size_t i = 0; i < size; ++i) pop.push_back(reduced.expand(sample_uniform(reduced.domains(), rng)));
        return pop;
    }
    if (strategy == Strategy::fx && rules.empty() && dynamic_cast<const ReducedProblem*>(problem.get()) == nullptr)
        throw std::invalid_argument("the fx strategy needs functioning rules");
    for (std::size_t i = 0; i < size; ++i) pop.push_back(sample_uniform(problem->domains(), rng));
    return pop;
}

void apply_velocity_bounds(std::span<double> x, std::span<double> v, std::span<const VariableDomain> domains) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] < domains[j].lower) {
            x[j] = domains[j].lower;
            v[j] = -v[j];
        } else if (x[j] > domains[j].upper) {
            x[j] = domains[j].upper;
            v[j] = -v[j];
        }
    }
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Evaluation bookkeeping shared by both algorithms.
class Tracker {
public:
    Tracker(const Problem& problem, const OptimizerConfig& config, const Observer& observer)
        : problem_(problem), config_(config), observer_(observer), scale_(problem.constraint_count()) {}

    std::size_t remaining() const { return config_.max_fe - fe_used_; }

    /// Evaluates the first `count` points and normalizes G with the merged scale.
    std::vector<Evaluation> evaluate(const std::vector<std::vector<double>>& points, std::size_t count) {
        std::vector<Evaluation> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            out.push_back(problem_.evaluate(points[i]));
            ++fe_used_;
            const Evaluation& e = out.back();
            if (e.feasible && (std::isnan(best_feasible_) || e.objective < best_feasible_)) best_feasible_ = e.objective;
        }
        for (const auto& e : out) scale_.merge(e.violations);
        for (auto& e : out) e.normalized_violation = scale_.normalize(e.violations);
        return out;
    }

    void renormalize(std::vector<Evaluation>& evals) const {
        for (auto& e : evals) e.normalized_violation = scale_.normalize(e.violations);
    }

    void record(const std::vector<Evaluation>& current) {
        GenerationStats s;
        s.generation = history_.size();
        s.fe_used = fe_used_;
        s.best_feasible = best_feasible_;
        std::size_t infeasible = 0;
        for (const auto& e : current) infeasible += e.feasible ? 0 : 1;
        s.infeasible_fraction = current.empty() ? 0.0 : static_cast<double>(infeasible) / current.size();
        history_.push_back(s);
        if (observer_) observer_(s);
    }

    RunResult finish(const std::vector<std::vector<double>>& positions, const std::vector<Evaluation>& evals) {
        RunResult r;
        std::size_t best = 0;
        for (std::size_t i = 1; i < evals.size(); ++i)
            if (deb_better(evals[i], evals[best])) best = i;
        r.best_position = positions[best];
        r.best_evaluation = evals[best];
        r.history = std::move(history_);
        r.fe_used = fe_used_;
        return r;
    }

private:
    const Problem& problem_;
    const OptimizerConfig& config_;
    const Observer& observer_;
    ViolationScale scale_;
    std::size_t fe_used_ = 0;
    double best_feasible_ = kNaN;
    std::vector<GenerationStats> history_;
};

std::vector<std::vector<double>> starting_points(const Problem& problem, const OptimizerConfig& config,
                                                 std::vector<std::vector<double>> initial) {
    config.validate();
    const auto& domains = problem.domains();
    if (initial.empty()) {
        Rng rng(config.seed, kInitStream);
        for (std::size_t i = 0; i < config.population_size; ++i) initial.push_back(sample_uniform(domains, rng));
    }
    if (initial.size() != config.population_size)
        throw std::invalid_argument("initial population has " + std::to_string(initial.size()) + " members, expected " +
                                    std::to_string(config.population_size));
    for (auto& x : initial) {
        if (x.size() != domains.size()) throw std::invalid_argument("initial position has the wrong dimension");
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], domains[j].lower, domains[j].upper);
    }
    return initial;
}

}  // namespace

RunResult pso_run(const Problem& problem, const OptimizerConfig& config, std::vector<std::vector<double>> initial,
                  const Observer& observer) {
    auto x = starting_points(problem, config, std::move(initial));
    const auto& domains = problem.domains();
    const std::size_t np = x.size();
    const std::size_t n = domains.size();
    Rng rng(config.seed, kSearchStream);
    Tracker tracker(problem, config, observer);

    std::vector<double> vmax(n);
    for (std::size_t j = 0; j < n; ++j) vmax[j] = config.pso.vmax_fraction * domains[j].width();
    std::vector<std::vector<double>> v(np, std::vector<double>(n, 0.0));

    auto current = tracker.evaluate(x, np);
    auto pbest = x;
    auto pbest_eval = current;
    auto best_index = [&] {
        std::size_t b = 0;
        for (std::size_t i = 1; i < np; ++i)
            if (deb_better(pbest_eval[i], pbest_eval[b])) b = i;
        return b;
    };
    std::size_t g = best_index();
    tracker.record(current);

    while (tracker.remaining() > 0) {
        const std::size_t count = std::min(np, tracker.remaining());
        const std::vector<double> gbest = pbest[g];
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double r1 = rng.uniform();
                const double r2 = rng.uniform();
                double vel = config.pso.inertia * v[i][j] + config.pso.cognitive * r1 * (pbest[i][j] - x[i][j]) +
                             config.pso.social * r2 * (gbest[j] - x[i][j]);
                v[i][j] = std::clamp(vel, -vmax[j], vmax[j]);
                x[i][j] += v[i][j];
            }
            apply_velocity_bounds(x[i], v[i], domains);
        }
        auto fresh = tracker.evaluate(x, count);
        tracker.renormalize(pbest_eval);
        tracker.renormalize(current);
        for (std::size_t i = 0; i < count; ++i) {
            current[i] = fresh[i];
            if (deb_better(fresh[i], pbest_eval[i])) {
                pbest[i] = x[i];
                pbest_eval[i] = fresh[i];
            }
        }
        g = best_index();
        tracker.record(current);
    }
    return tracker.finish(pbest, pbest_eval);
}

RunResult de_run(const Problem& problem, const OptimizerConfig& config, std::vector<std::vector<double>> initial,
                 const Observer& observer) {
    auto pop = starting_points(problem, config, std::move(initial));
    const auto& domains = problem.domains();
    const std::size_t np = pop.size();
    const std::size_t n = domains.size();
    Rng rng(config.seed, kSearchStream);
    Tracker tracker(problem, config, observer);

    auto evals = tracker.evaluate(pop, np);
    tracker.record(evals);

    std::vector<std::vector<double>> trials(np, std::vector<double>(n));
    while (tracker.remaining() > 0) {
        const std::size_t count = std::min(np, tracker.remaining());
        for (std::size_t i = 0; i < count; ++i) {
            std::size_t r1, r2, r3;
            do r1 = rng.index(np);
            while (r1 == i);
            do r2 = rng.index(np);
            while (r2 == i || r2 == r1);
            do r3 = rng.index(np);
            while (r3 == i || r3 == r1 || r3 == r2);
            const std::size_t jrand = rng.index(n);
            for (std::size_t j = 0; j < n; ++j) {
                const bool cross = rng.uniform() < config.de.crossover || j == jrand;
                double value = cross ? pop[r1][j] + config.de.scale * (pop[r2][j] - pop[r3][j]) : pop[i][j];
                trials[i][j] = std::clamp(value, domains[j].lower, domains[j].upper);
            }
        }
        auto fresh = tracker.evaluate(trials, count);
        tracker.renormalize(evals);
        for (std::size_t i = 0; i < count; ++i) {
            if (deb_better(fresh[i], evals[i])) {
                pop[i] = trials[i];
                evals[i] = fresh[i];
            }
        }
        tracker.record(evals);
    }
    return tracker.finish(pop, evals);
}

RunResult optimize(const Problem& problem, const OptimizerConfig& config, std::vector<std::vector<double>> initial,
                   const Observer& observer) {
    return config.algorithm == Algorithm::pso ? pso_run(problem, config, std::move(initial), observer)
                                              : de_run(problem, config, std::move(initial), observer);
}

}  // namespace framefx
