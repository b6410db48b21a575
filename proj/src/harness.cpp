#include "framefx/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "framefx/frame_problem.hpp"

namespace framefx {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

std::vector<double> numbers_from(const json& j) {
    std::vector<double> out;
    for (const auto& v : j) out.push_back(number_from(v));
    return out;
}

json numbers_to(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(number_or_null(x));
    return a;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string format_number(double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

}  // namespace

ProblemBundle stepped_column_bundle(const SteppedColumnSpec& spec) {
    auto p = stepped_column_problem(spec);
    ProblemBundle b;
    b.name = p->name();
    b.problem = p;
    b.rules = {p->default_rule()};
    b.relaxation = p->discrete() ? nullptr : p;
    b.descriptor = {{"kind", "stepped-column"},
                    {"segments", spec.segment_count},
                    {"segment_length", spec.segment_length},
                    {"tip_load", spec.tip_load},
                    {"density", spec.density},
                    {"allowable_stress", spec.allowable_stress},
                    {"radius_min", spec.radius_min},
                    {"radius_max", spec.radius_max},
                    {"catalog_radii", spec.catalog_radii}};
    return b;
}

ProblemBundle sphere_bundle(std::size_t n) {
    auto p = std::make_shared<const SphereProblem>(n);
    ProblemBundle b;
    b.name = "sphere-" + std::to_string(n);
    b.problem = p;
    b.relaxation = p;
    b.descriptor = {{"kind", "sphere"}, {"dimension", n}};
    return b;
}

ProblemBundle frame_bundle(const std::filesystem::path& config_path) {
    auto cfg = std::make_shared<const FrameConfig>(load_frame_config(config_path));
    ProblemBundle b;
    b.name = cfg->name;
    b.problem = std::make_shared<const FrameProblem>(cfg);
    b.rules = cfg->functioning;
    b.budgets = cfg->budgets;
    b.relaxation = std::make_shared<const FrameRelaxation>(cfg);
    b.descriptor = {{"kind", "frame"}, {"name", cfg->name}, {"file", config_path.filename().string()}};
    return b;
}

std::string CellSpec::name() const {
    return std::string(to_string(algorithm)) + "-" + std::string(to_string(strategy));
}

void ExperimentPlan::validate() const {
    if (name.empty()) throw PlanError("plan needs a name");
    if (!problem.problem) throw PlanError("plan needs a problem");
    if (strategies.empty() || algorithms.empty()) throw PlanError("plan has no cells");
    if (trials < 1) throw PlanError("trials must be at least 1");
    for (Strategy s : strategies) {
        if (s != Strategy::none && problem.rules.empty())
            throw PlanError("strategy " + std::string(to_string(s)) + " needs functioning rules, and " + problem.name +
                            " declares none");
    }
    for (const auto& c : cells()) {
        OptimizerConfig oc;
        oc.population_size = c.budget.population;
        oc.max_fe = c.budget.max_fe;
        oc.pso = pso;
        oc.de = de;
        try {
            oc.validate();
        } catch (const std::invalid_argument& e) {
            throw PlanError("cell " + c.name() + ": " + e.what());
        }
    }
}

std::vector<CellSpec> ExperimentPlan::cells() const {
    std::vector<CellSpec> out;
    for (Algorithm a : algorithms)
        for (Strategy s : strategies) out.push_back({a, s, budgets[s]});
    return out;
}

json ExperimentPlan::manifest() const {
    json cells_doc = json::array();
    for (const auto& c : cells())
        cells_doc.push_back({{"cell", c.name()}, {"population", c.budget.population}, {"max_fe", c.budget.max_fe}});
    return {{"plan", name},
            {"problem", problem.descriptor},
            {"trials", trials},
            {"seed_base", seed_base},
            {"cells", cells_doc},
            {"pso",
             {{"inertia", pso.inertia},
              {"cognitive", pso.cognitive},
              {"social", pso.social},
              {"vmax_fraction", pso.vmax_fraction}}},
            {"de", {{"scale", de.scale}, {"crossover", de.crossover}}}};
}

std::vector<StackReport> practicality_report(const Problem& problem, std::span<const double> full_design) {
    const auto areas = problem.design_areas(full_design);
    std::vector<StackReport> out;
    for (const auto& stack : problem.column_stacks()) {
        StackReport r;
        r.name = stack.name;
        r.heights = stack.heights;
        for (std::size_t id : stack.variables) r.areas.push_back(areas.at(id));
        for (std::size_t k = 1; k < r.areas.size(); ++k) {
            if (r.areas[k] > r.areas[k - 1]) {
                r.monotone = false;
                r.offending = std::pair{k - 1, k};
                break;
            }
        }
        const double base = r.areas.empty() ? 1.0 : r.areas.front();
        for (double a : r.areas) r.normalized.push_back(a / base);
        out.push_back(std::move(r));
    }
    return out;
}

double RunRecord::final_objective() const {
    if (failed || best_history.empty() || std::isnan(best_history.back())) return kInf;
    return best_history.back();
}

json to_json(const RunRecord& r) {
    json stacks = json::array();
    for (const auto& s : r.stacks) {
        json off = nullptr;
        if (s.offending) off = {s.offending->first, s.offending->second};
        stacks.push_back({{"name", s.name},
                          {"monotone", s.monotone},
                          {"offending", off},
                          {"heights", numbers_to(s.heights)},
                          {"areas", numbers_to(s.areas)},
                          {"normalized", numbers_to(s.normalized)}});
    }
    return {{"problem", r.problem},
            {"algorithm", to_string(r.algorithm)},
            {"strategy", to_string(r.strategy)},
            {"seed", r.seed},
            {"population", r.population},
            {"max_fe", r.max_fe},
            {"fe_used", r.fe_used},
            {"failed", r.failed},
            {"error", r.error},
            {"history",
             {{"fe", r.fe_history},
              {"best", numbers_to(r.best_history)},
              {"infeasible_fraction", numbers_to(r.infeasible_fraction_history)}}},
            {"best_design",
             {{"design", numbers_to(r.best_design)},
              {"objective", number_or_null(r.best_objective)},
              {"violations", numbers_to(r.best_violations)},
              {"feasible", r.best_feasible}}},
            {"stacks", stacks}};
}

RunRecord record_from_json(const json& j) {
    RunRecord r;
    r.problem = j.at("problem").get<std::string>();
    auto a = parse_algorithm(j.at("algorithm").get<std::string>());
    auto s = parse_strategy(j.at("strategy").get<std::string>());
    if (!a || !s) throw PlanError("record has an unknown algorithm or strategy");
    r.algorithm = *a;
    r.strategy = *s;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.population = j.at("population").get<std::size_t>();
    r.max_fe = j.at("max_fe").get<std::size_t>();
    r.fe_used = j.at("fe_used").get<std::size_t>();
    r.failed = j.at("failed").get<bool>();
    r.error = j.at("error").get<std::string>();
    const json& h = j.at("history");
    r.fe_history = h.at("fe").get<std::vector<std::size_t>>();
    r.best_history = numbers_from(h.at("best"));
    r.infeasible_fraction_history = numbers_from(h.at("infeasible_fraction"));
    const json& b = j.at("best_design");
    r.best_design = numbers_from(b.at("design"));
    r.best_objective = number_from(b.at("objective"));
    r.best_violations = numbers_from(b.at("violations"));
    r.best_feasible = b.at("feasible").get<bool>();
    for (const auto& sj : j.at("stacks")) {
        StackReport sr;
        sr.name = sj.at("name").get<std::string>();
        sr.monotone = sj.at("monotone").get<bool>();
        if (!sj.at("offending").is_null())
            sr.offending = std::pair{sj["offending"][0].get<std::size_t>(), sj["offending"][1].get<std::size_t>()};
        sr.heights = numbers_from(sj.at("heights"));
        sr.areas = numbers_from(sj.at("areas"));
        sr.normalized = numbers_from(sj.at("normalized"));
        r.stacks.push_back(std::move(sr));
    }
    return r;
}

RunRecord run_trial(const ProblemBundle& bundle, const CellSpec& cell, std::uint64_t seed, const PsoParams& pso,
                    const DeParams& de) {
    RunRecord r;
    r.problem = bundle.name;
    r.algorithm = cell.algorithm;
    r.strategy = cell.strategy;
    r.seed = seed;
    r.population = cell.budget.population;
    r.max_fe = cell.budget.max_fe;
    try {
        ProblemPtr search = bundle.problem;
        if (cell.strategy == Strategy::fx) search = wrap_objective(bundle.problem, bundle.rules);

        OptimizerConfig config;
        config.algorithm = cell.algorithm;
        config.population_size = cell.budget.population;
        config.max_fe = cell.budget.max_fe;
        config.seed = seed;
        config.pso = pso;
        config.de = de;

        Rng init(seed, kInitStream);
        auto initial = initialize_population(search, config.population_size, cell.strategy, bundle.rules, init);
        const RunResult result = optimize(*search, config, std::move(initial));

        r.fe_used = result.fe_used;
        for (const auto& g : result.history) {
            r.fe_history.push_back(g.fe_used);
            r.best_history.push_back(g.best_feasible);
            r.infeasible_fraction_history.push_back(g.infeasible_fraction);
        }
        r.best_design = search->full_design(result.best_position);
        const Problem& full = search->full_problem();
        const Evaluation e = full.evaluate(r.best_design);
        r.best_objective = e.objective;
        r.best_violations = e.violations;
        r.best_feasible = e.feasible;
        r.stacks = practicality_report(full, r.best_design);
    } catch (const std::exception& e) {
        r.failed = true;
        r.error = e.what();
    }
    return r;
}

MeanHistory mean_history(const std::vector<RunRecord>& records) {
    MeanHistory m;
    std::vector<const RunRecord*> ok;
    for (const auto& r : records)
        if (!r.failed) ok.push_back(&r);
    if (ok.empty()) return m;
    const auto& fe = ok.front()->fe_history;
    for (const auto* r : ok)
        if (r->fe_history != fe || r->best_history.size() != fe.size() ||
            r->infeasible_fraction_history.size() != fe.size())
            throw PlanError("ragged histories in cell " + ok.front()->cell());
    for (std::size_t g = 0; g < fe.size(); ++g) {
        double best = 0.0, frac = 0.0;
        std::size_t count = 0;
        for (const auto* r : ok) {
            frac += r->infeasible_fraction_history[g];
            if (!std::isnan(r->best_history[g])) {
                best += r->best_history[g];
                ++count;
            }
        }
        m.fe.push_back(static_cast<double>(fe[g]));
        m.best.push_back(count ? best / static_cast<double>(count) : kNaN);
        m.infeasible_fraction.push_back(frac / static_cast<double>(ok.size()));
        m.feasible_trials.push_back(count);
    }
    return m;
}

double median(std::vector<double> values) {
    if (values.empty()) return kNaN;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

CellSummary summarize_cell(const std::string& cell, const std::vector<RunRecord>& records) {
    CellSummary s;
    s.cell = cell;
    if (!records.empty()) {
        s.algorithm = records.front().algorithm;
        s.strategy = records.front().strategy;
    }
    s.trials = records.size();
    std::vector<double> finals, initial;
    for (const auto& r : records) {
        if (r.failed) {
            ++s.failed;
            continue;
        }
        finals.push_back(r.final_objective());
        initial.push_back(r.best_history.empty() || std::isnan(r.best_history.front()) ? kInf : r.best_history.front());
        if (r.best_feasible) ++s.feasible;
        if (std::all_of(r.stacks.begin(), r.stacks.end(), [](const StackReport& x) { return x.monotone; }))
            ++s.monotone_designs;
    }
    if (finals.empty()) {
        s.mean = s.median = s.best = s.worst = s.mean_initial_best = kNaN;
        return s;
    }
    s.mean = std::accumulate(finals.begin(), finals.end(), 0.0) / static_cast<double>(finals.size());
    s.median = median(finals);
    s.best = *std::min_element(finals.begin(), finals.end());
    s.worst = *std::max_element(finals.begin(), finals.end());
    s.mean_initial_best = std::accumulate(initial.begin(), initial.end(), 0.0) / static_cast<double>(initial.size());
    return s;
}

double improvement_vs_none(const CellSummary& cell, const CellSummary& none) {
    if (!std::isfinite(cell.median) || !std::isfinite(none.median) || none.median == 0.0) return kNaN;
    return 100.0 * (none.median - cell.median) / none.median;
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_summary_csv(const std::vector<CellSummary>& summaries, std::ostream& out) {
    out << "cell,algorithm,strategy,trials,failed,feasible,mean,median,best,worst,mean_initial_best,"
           "improvement_vs_none_pct,monotone_designs\n";
    for (const auto& s : summaries) {
        out << s.cell << ',' << to_string(s.algorithm) << ',' << to_string(s.strategy) << ',' << s.trials << ','
            << s.failed << ',' << s.feasible << ',' << format_number(s.mean) << ',' << format_number(s.median) << ','
            << format_number(s.best) << ',' << format_number(s.worst) << ',' << format_number(s.mean_initial_best)
            << ',' << format_number(s.improvement_vs_none) << ',' << s.monotone_designs << '\n';
    }
}

void write_history_csv(const MeanHistory& h, std::ostream& out) {
    out << "fe,best,infeasible_fraction,feasible_trials\n";
    for (std::size_t g = 0; g < h.fe.size(); ++g)
        out << format_number(h.fe[g]) << ',' << format_number(h.best[g]) << ','
            << format_number(h.infeasible_fraction[g]) << ',' << h.feasible_trials[g] << '\n';
}

namespace {

std::vector<CellSummary> summarize_all(const std::vector<std::pair<std::string, std::vector<RunRecord>>>& groups) {
    std::vector<CellSummary> out;
    for (const auto& [cell, records] : groups) out.push_back(summarize_cell(cell, records));
    for (auto& s : out) {
        for (const auto& n : out)
            if (n.algorithm == s.algorithm && n.strategy == Strategy::none && n.trials > 0)
                s.improvement_vs_none = improvement_vs_none(s, n);
    }
    return out;
}

}  // namespace

PlanResult run_plan(const ExperimentPlan& plan, const std::filesystem::path& out_root, const RunOptions& options) {
    plan.validate();
    PlanResult result;
    result.directory = out_root / plan.name;
    const std::filesystem::path manifest_path = result.directory / "plan.json";
    const std::string manifest = plan.manifest().dump(2) + "\n";
    if (std::filesystem::exists(manifest_path)) {
        if (read_file(manifest_path) != manifest)
            throw PlanError("results in " + result.directory.string() +
                            " belong to a different plan; choose another plan name or output directory");
    } else {
        write_atomic(manifest_path, manifest);
    }

    struct Task {
        CellSpec cell;
        std::uint64_t seed;
        std::filesystem::path path;
    };
    const auto cells = plan.cells();
    std::vector<Task> tasks;
    std::vector<std::optional<RunRecord>> slots;
    for (const auto& c : cells) {
        for (std::size_t t = 0; t < plan.trials; ++t) {
            const std::uint64_t seed = plan.seed_base + t;
            tasks.push_back({c, seed, result.directory / c.name() / (std::to_string(seed) + ".json")});
            slots.emplace_back();
            if (std::filesystem::exists(tasks.back().path)) {
                try {
                    slots.back() = record_from_json(json::parse(read_file(tasks.back().path)));
                } catch (const std::exception&) {
                    slots.back().reset();
                }
            }
        }
    }

    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < tasks.size(); ++i)
        if (!slots[i]) pending.push_back(i);
    result.new_trials = pending.size();

    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::exception_ptr failure;
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= pending.size()) return;
            const Task& task = tasks[pending[k]];
            try {
                RunRecord r = run_trial(plan.problem, task.cell, task.seed, plan.pso, plan.de);
                write_atomic(task.path, to_json(r).dump(2) + "\n");
                std::lock_guard lock(mu);
                if (options.on_record) options.on_record(r);
                slots[pending[k]] = std::move(r);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                next = pending.size();
            }
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, pending.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<std::pair<std::string, std::vector<RunRecord>>> groups;
    std::size_t k = 0;
    for (const auto& c : cells) {
        groups.emplace_back(c.name(), std::vector<RunRecord>{});
        for (std::size_t t = 0; t < plan.trials; ++t, ++k) groups.back().second.push_back(*slots[k]);
    }
    result.summaries = summarize_all(groups);

    std::ostringstream summary;
    write_summary_csv(result.summaries, summary);
    write_atomic(result.directory / "summary.csv", summary.str());
    for (const auto& [cell, records] : groups) {
        std::ostringstream h;
        write_history_csv(mean_history(records), h);
        write_atomic(result.directory / "histories" / (cell + ".csv"), h.str());
        for (const auto& r : records) result.records.push_back(r);
    }
    return result;
}

std::vector<std::pair<std::string, std::vector<RunRecord>>> load_results(const std::filesystem::path& plan_dir) {
    std::vector<std::pair<std::string, std::vector<RunRecord>>> groups;
    if (!std::filesystem::is_directory(plan_dir)) return groups;
    std::vector<std::filesystem::path> cell_dirs;
    for (const auto& e : std::filesystem::directory_iterator(plan_dir))
        if (e.is_directory() && e.path().filename() != "histories") cell_dirs.push_back(e.path());
    std::sort(cell_dirs.begin(), cell_dirs.end());
    for (const auto& dir : cell_dirs) {
        std::vector<std::pair<std::uint64_t, RunRecord>> recs;
        for (const auto& e : std::filesystem::directory_iterator(dir)) {
            if (e.path().extension() != ".json") continue;
            RunRecord r = record_from_json(json::parse(read_file(e.path())));
            recs.emplace_back(r.seed, std::move(r));
        }
        if (recs.empty()) continue;
        std::sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        groups.emplace_back(dir.filename().string(), std::vector<RunRecord>{});
        for (auto& [seed, r] : recs) groups.back().second.push_back(std::move(r));
    }
    return groups;
}

}  // namespace framefx
