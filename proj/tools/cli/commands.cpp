#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "framefx/frame_problem.hpp"
#include "framefx/grouping.hpp"
#include "framefx/svg.hpp"

#ifndef FRAMEFX_DEFAULT_DATA_DIR
#define FRAMEFX_DEFAULT_DATA_DIR "data"
#endif

namespace framefx::cli {

namespace {

/// Bad input: flags, configs, plans.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream s(text);
    std::string item;
    while (std::getline(s, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<Algorithm> parse_algorithms(const std::string& text) {
    if (text == "all") return {Algorithm::pso, Algorithm::de};
    std::vector<Algorithm> out;
    for (const auto& t : split(text)) {
        auto a = parse_algorithm(t);
        if (!a) throw UsageError("--algo: unknown algorithm '" + t + "' (expected pso, de or all)");
        out.push_back(*a);
    }
    if (out.empty()) throw UsageError("--algo: no algorithm given");
    return out;
}

std::vector<Strategy> parse_strategies(const std::string& text) {
    if (text == "all") return {kAllStrategies.begin(), kAllStrategies.end()};
    std::vector<Strategy> out;
    for (const auto& t : split(text)) {
        auto s = parse_strategy(t);
        if (!s) throw UsageError("--strategy: unknown strategy '" + t + "' (expected none, ifx, fx or all)");
        out.push_back(*s);
    }
    if (out.empty()) throw UsageError("--strategy: no strategy given");
    return out;
}

std::string fmt(double v, int precision = 6) {
    if (std::isnan(v)) return "-";
    std::ostringstream s;
    s << std::setprecision(precision) << v;
    return s.str();
}

/// Maps exceptions to exit codes and prints them.
template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const PlanError& e) {
        err << "plan error: " << e.what() << '\n';
        return kConfigError;
    } catch (const SectionError& e) {
        err << "section table error: " << e.what() << '\n';
        return kConfigError;
    } catch (const FunctioningError& e) {
        err << "functioning error: " << e.what() << '\n';
        return kConfigError;
    } catch (const SingularStiffnessError& e) {
        err << "analysis error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << '\n';
        return kRuntimeError;
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    if (!f) throw std::runtime_error("failed writing " + path.string());
}

std::string families(const ConstraintSet& cs) {
    std::vector<std::string> f;
    if (cs.stress_allowable) f.push_back("stress (allowable " + fmt(*cs.stress_allowable) + " kN/cm2)");
    if (cs.roof_drift_limit)
        f.push_back("lateral drift (roof limit " + fmt(*cs.roof_drift_limit) + " cm)");
    else if (cs.drift_index)
        f.push_back("lateral drift (index " + fmt(*cs.drift_index) + ")");
    if (cs.interstory_index) f.push_back("inter-story drift (index " + fmt(*cs.interstory_index) + ")");
    if (cs.lrfd) f.push_back(std::string("LRFD interaction (K ") + (cs.k_policy == KPolicy::sway ? "sway" : "fixed") + ")");
    std::string out;
    for (std::size_t i = 0; i < f.size(); ++i) out += (i ? ", " : "") + f[i];
    return out;
}

}  // namespace

std::filesystem::path data_dir() {
    if (const char* env = std::getenv("FRAMEFX_DATA")) return env;
    return FRAMEFX_DEFAULT_DATA_DIR;
}

std::filesystem::path output_root(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("FRAMEFX_OUT"); env && *env) return env;
    return "results";
}

ProblemBundle resolve_problem(const ProblemArgs& args) {
    if (!args.config.empty()) return frame_bundle(args.config);
    if (args.problem == "stepped-column") {
        SteppedColumnSpec spec;
        spec.segment_count = args.segments;
        return stepped_column_bundle(spec);
    }
    if (args.problem == "sphere") return sphere_bundle(args.dim);
    static const std::map<std::string, std::string> shipped = {
        {"frame8", "frame8.json"}, {"frame15", "frame15.json"}, {"frame24", "frame24.json"}};
    if (auto it = shipped.find(args.problem); it != shipped.end()) return frame_bundle(data_dir() / "frames" / it->second);
    throw UsageError("--problem: unknown problem '" + args.problem +
                     "' (expected stepped-column, sphere, frame8, frame15, frame24, or pass --config)");
}

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        ProblemBundle bundle = resolve_problem(args.problem);
        ExperimentPlan plan;
        plan.problem = bundle;
        plan.algorithms = parse_algorithms(args.algo);
        plan.strategies = parse_strategies(args.strategy);
        plan.trials = args.trials;
        plan.seed_base = args.seed;
        plan.budgets = bundle.budgets.value_or(StrategyBudgets{});
        for (Strategy s : kAllStrategies) {
            if (args.pop) plan.budgets[s].population = *args.pop;
            if (args.max_fe) plan.budgets[s].max_fe = *args.max_fe;
        }
        plan.name = args.name;
        if (plan.name.empty()) {
            plan.name = bundle.name;
            if (args.algo != "all") plan.name += "_" + args.algo;
            if (args.strategy != "all") plan.name += "_" + args.strategy;
            for (char& c : plan.name)
                if (c == ',') c = '+';
        }
        plan.validate();

        RunOptions opts;
        opts.jobs = args.jobs ? args.jobs : std::max(1u, std::thread::hardware_concurrency());
        const PlanResult result = run_plan(plan, output_root(args.out), opts);

        out << "plan " << plan.name << ": " << plan.cells().size() << " cells x " << plan.trials << " trials -> "
            << result.directory.string() << '\n';
        out << "resumed: " << result.new_trials << " new trials\n";
        out << std::left << std::setw(10) << "cell" << std::right << std::setw(8) << "trials" << std::setw(8)
            << "failed" << std::setw(10) << "feasible" << std::setw(14) << "median" << std::setw(14) << "mean"
            << std::setw(14) << "best" << std::setw(12) << "vs none %" << '\n';
        for (const auto& s : result.summaries) {
            out << std::left << std::setw(10) << s.cell << std::right << std::setw(8) << s.trials << std::setw(8)
                << s.failed << std::setw(10) << s.feasible << std::setw(14) << fmt(s.median, 8) << std::setw(14)
                << fmt(s.mean, 8) << std::setw(14) << fmt(s.best, 8) << std::setw(12)
                << fmt(s.improvement_vs_none, 4) << '\n';
        }
        return static_cast<int>(kOk);
    });
}

int cmd_interactions(const InteractionArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        ProblemBundle bundle = resolve_problem(args.problem);
        if (!bundle.relaxation) throw UsageError(bundle.name + " has no continuous relaxation");
        if (!(args.eta >= 0.0)) throw UsageError("--eta must be non-negative");
        const InteractionMatrix m = problem_interactions(bundle.relaxation, args.eta, args.penalty);
        const std::filesystem::path dir =
            args.out.empty() ? output_root("") / "interactions" / bundle.name : std::filesystem::path(args.out);
        render_matrix(m, dir);
        std::size_t first_row = 0;
        for (std::size_t j = 1; j < m.n; ++j) first_row += m.interacts(0, j) ? 1 : 0;
        out << bundle.name << ": " << m.n << "x" << m.n << " interaction matrix\n";
        out << "FE cost: " << m.fe_cost << " evaluations\n";
        out << "interacting pairs: " << m.edge_count() << " of " << m.n * (m.n - 1) / 2 << '\n';
        out << "variable 1 interacts with " << first_row << " of " << m.n - 1 << " others\n";
        if (m.edge_count() == 0) out << "adjacency: empty (separable)\n";
        out << "wrote " << (dir / "interactions.csv").string() << " and " << (dir / "interactions.svg").string()
            << '\n';
        return static_cast<int>(kOk);
    });
}

namespace {

void plot_plan(const std::filesystem::path& dir, std::ostream& out) {
    const auto groups = load_results(dir);
    if (groups.empty()) throw UsageError("no run records under " + dir.string());
    std::vector<Series> best, infeasible;
    std::ostringstream csv;
    csv << "cell,fe,best,infeasible_fraction,feasible_trials\n";
    for (const auto& [cell, records] : groups) {
        const MeanHistory h = mean_history(records);
        best.push_back({cell, h.fe, h.best});
        infeasible.push_back({cell, h.fe, h.infeasible_fraction});
        for (std::size_t g = 0; g < h.fe.size(); ++g)
            csv << cell << ',' << h.fe[g] << ',' << std::setprecision(10) << h.best[g] << ','
                << h.infeasible_fraction[g] << ',' << h.feasible_trials[g] << '\n';
    }
    const std::string plan = dir.filename().string();
    std::ostringstream svg1, svg2;
    write_line_chart(svg1, best, {"Mean best feasible objective: " + plan, "function evaluations", "objective"});
    write_line_chart(svg2, infeasible, {"Mean infeasible fraction: " + plan, "function evaluations",
                                        "infeasible fraction"});
    write_text(dir / "convergence.svg", svg1.str());
    write_text(dir / "infeasible.svg", svg2.str());
    write_text(dir / "convergence.csv", csv.str());
    out << "wrote " << (dir / "convergence.svg").string() << '\n';
    out << "wrote " << (dir / "infeasible.svg").string() << '\n';

    std::map<std::string, std::vector<Series>> profiles;
    std::map<std::string, std::ostringstream> profile_csv;
    for (const auto& [cell, records] : groups) {
        std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> sums;
        std::map<std::string, std::size_t> counts;
        for (const auto& r : records) {
            if (r.failed) continue;
            for (const auto& s : r.stacks) {
                auto& [heights, acc] = sums[s.name];
                if (acc.empty()) {
                    heights = s.heights;
                    acc.assign(s.normalized.size(), 0.0);
                }
                for (std::size_t k = 0; k < acc.size() && k < s.normalized.size(); ++k) acc[k] += s.normalized[k];
                ++counts[s.name];
            }
        }
        for (auto& [stack, data] : sums) {
            auto& [heights, acc] = data;
            for (double& v : acc) v /= static_cast<double>(counts[stack]);
            profiles[stack].push_back({cell, heights, acc});
            auto& c = profile_csv[stack];
            for (std::size_t k = 0; k < acc.size(); ++k) c << cell << ',' << heights[k] << ',' << acc[k] << '\n';
        }
    }
    for (const auto& [stack, series] : profiles) {
        std::ostringstream svg;
        write_line_chart(svg, series, {"Mean normalized column areas: " + stack, "height above base (cm)",
                                       "area / base area"});
        const auto svg_path = dir / ("column_profile_" + stack + ".svg");
        write_text(svg_path, svg.str());
        write_text(dir / ("column_profile_" + stack + ".csv"),
                   "cell,height_cm,normalized_area\n" + profile_csv[stack].str());
        out << "wrote " << svg_path.string() << '\n';
    }
}

}  // namespace

int cmd_plot(const std::filesystem::path& results, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!std::filesystem::is_directory(results)) throw UsageError("results directory " + results.string() + " not found");
        std::vector<std::filesystem::path> plans;
        if (std::filesystem::exists(results / "plan.json")) {
            plans.push_back(results);
        } else {
            for (const auto& e : std::filesystem::directory_iterator(results))
                if (e.is_directory() && std::filesystem::exists(e.path() / "plan.json")) plans.push_back(e.path());
            std::sort(plans.begin(), plans.end());
        }
        if (plans.empty()) throw UsageError("no plans found under " + results.string());
        for (const auto& p : plans) plot_plan(p, out);
        return static_cast<int>(kOk);
    });
}

int cmd_validate(const std::filesystem::path& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto cfg = std::make_shared<const FrameConfig>(load_frame_config(config));
        const FrameProblem problem(cfg);
        const std::size_t n = problem.dimension();
        const std::size_t reduced = reduced_dimension(cfg->functioning, n);
        std::size_t beams = 0;
        for (auto r : cfg->model.group_roles) beams += r == MemberRole::beam ? 1 : 0;
        out << cfg->name << (cfg->provenance.empty() ? "" : " (" + cfg->provenance + ")") << ": "
            << cfg->model.nodes.size() << " nodes, " << cfg->model.members.size() << " members, "
            << cfg->model.story_levels.size() << " stories\n";
        out << n << " variables, " << reduced << " under functioning\n";
        out << "groups: " << beams << " beam, " << n - beams << " column\n";
        for (std::size_t r = 0; r < cfg->functioning.size(); ++r) {
            const auto& rule = cfg->functioning[r];
            out << "rule " << cfg->column_stacks[r].name << ": " << rule.replaced_count() << " groups -> "
                << FunctioningRule::reduced_parameter_count << " parameters\n";
        }
        out << "constraint families: " << families(cfg->constraints) << '\n';
        out << "constraint values: " << problem.constraint_count() << '\n';
        const auto x = problem.extreme_design(true);
        const Evaluation e = problem.evaluate(x);
        const double gmax = e.violations.empty() ? 0.0 : *std::max_element(e.violations.begin(), e.violations.end());
        out << "probe at largest sections: weight " << fmt(e.objective, 8) << " kg, "
            << (e.feasible ? "feasible" : "infeasible") << ", max g " << fmt(gmax) << '\n';
        return static_cast<int>(kOk);
    });
}

int cmd_sections(const std::string& pool, bool list, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::filesystem::path path = pool;
        if (pool.empty() || pool == "W") path = data_dir() / "sections" / "w_shapes.csv";
        else if (pool == "W14") path = data_dir() / "sections" / "w14.csv";
        if (!std::filesystem::exists(path)) throw UsageError("section table " + path.string() + " not found");
        const SectionPool p = load_section_table(path);
        out << p.label() << ": " << p.size() << " shapes\n";
        out << "smallest area: " << p[0].name << " " << fmt(p.min_area()) << " cm2\n";
        out << "largest area:  " << p[p.size() - 1].name << " " << fmt(p.max_area()) << " cm2\n";
        if (list) {
            out << "index,name,area_cm2,ix_cm4,sx_cm3,zx_cm3,rx_cm,ry_cm,depth_cm\n";
            for (std::size_t i = 0; i < p.size(); ++i) {
                const auto& s = p[i];
                out << i << ',' << s.name << ',' << fmt(s.area) << ',' << fmt(s.moment_of_inertia_x) << ','
                    << fmt(s.section_modulus_x) << ',' << fmt(s.plastic_modulus_x) << ','
                    << fmt(s.radius_of_gyration_x) << ',' << fmt(s.radius_of_gyration_y) << ',' << fmt(s.depth)
                    << '\n';
            }
        }
        return static_cast<int>(kOk);
    });
}

namespace {

void add_problem_flags(CLI::App* cmd, ProblemArgs& p) {
    cmd->add_option("--problem", p.problem, "stepped-column, sphere, frame8, frame15 or frame24")
        ->capture_default_str();
    cmd->add_option("--config", p.config, "Frame config file (overrides --problem)");
    cmd->add_option("--segments", p.segments, "Stepped column segment count")->capture_default_str()->check(
        CLI::PositiveNumber);
    cmd->add_option("--dim", p.dim, "Sphere dimension")->capture_default_str()->check(CLI::Range(2, 100000));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steel frame and stepped column design optimization with variable functioning", "framefx"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run seeded trials for every (algorithm, strategy) cell");
    add_problem_flags(run_cmd, run.problem);
    run_cmd->add_option("--algo", run.algo, "pso, de, a comma list, or all")->capture_default_str();
    run_cmd->add_option("--strategy", run.strategy, "none, ifx, fx, a comma list, or all")->capture_default_str();
    run_cmd->add_option("--trials", run.trials, "Trials per cell")->capture_default_str()->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", run.seed, "Seed of the first trial; trial t uses seed + t")->capture_default_str();
    run_cmd->add_option("--pop", run.pop, "Population size for every cell");
    run_cmd->add_option("--max-fe", run.max_fe, "Function evaluation budget for every cell");
    run_cmd->add_option("--jobs", run.jobs, "Worker threads (0: logical cores)")->capture_default_str();
    run_cmd->add_option("--out", run.out, "Output root (default $FRAMEFX_OUT or ./results)");
    run_cmd->add_option("--name", run.name, "Plan name (default derived from the problem and cells)");

    InteractionArgs inter;
    auto* inter_cmd = app.add_subcommand("interactions", "Pairwise variable interaction matrix");
    add_problem_flags(inter_cmd, inter.problem);
    inter_cmd->add_option("--eta", inter.eta, "Relative interaction threshold")->capture_default_str();
    inter_cmd->add_option("--penalty", inter.penalty, "Violation penalty factor")->capture_default_str();
    inter_cmd->add_option("--out", inter.out, "Output directory");
    std::uint64_t inter_seed = 0;
    inter_cmd->add_option("--seed", inter_seed, "Accepted for uniformity; the analysis is deterministic");

    std::string plot_dir;
    auto* plot_cmd = app.add_subcommand("plot", "Write SVG figures for a results tree");
    plot_cmd->add_option("results", plot_dir, "Plan directory or results root")->required();

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Check a frame config and probe one analysis");
    validate_cmd->add_option("path", validate_path, "Frame config file");
    validate_cmd->add_option("--config", validate_path, "Frame config file");

    std::string pool;
    bool list = false;
    auto* sections_cmd = app.add_subcommand("sections", "Summarize a section table");
    sections_cmd->add_option("pool", pool, "W, W14 or a CSV path")->capture_default_str();
    sections_cmd->add_flag("--list", list, "Print every shape");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    if (*run_cmd) return cmd_run(run, out, err);
    if (*inter_cmd) return cmd_interactions(inter, out, err);
    if (*plot_cmd) return cmd_plot(plot_dir, out, err);
    if (*validate_cmd) {
        if (validate_path.empty()) {
            err << "error: validate needs a config path\n";
            return kConfigError;
        }
        return cmd_validate(validate_path, out, err);
    }
    if (*sections_cmd) return cmd_sections(pool, list, out, err);
    return kConfigError;
}

}  // namespace framefx::cli
