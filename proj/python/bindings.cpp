#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/functional.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "commands.hpp"
#include "framefx/fea.hpp"
#include "framefx/frame_problem.hpp"
#include "framefx/fx.hpp"
#include "framefx/grouping.hpp"
#include "framefx/harness.hpp"

namespace py = pybind11;
using namespace framefx;

namespace {

FunctioningRule make_rule(std::vector<std::size_t> ids, std::vector<double> heights) {
    FunctioningRule r;
    r.replaced_variable_ids = std::move(ids);
    r.heights = std::move(heights);
    r.validate();
    return r;
}

py::dict interaction_dict(const InteractionMatrix& m) {
    const auto n = static_cast<py::ssize_t>(m.n);
    py::array_t<double> lambda({n, n}), threshold({n, n});
    py::array_t<bool> adjacency({n, n});
    auto l = lambda.mutable_unchecked<2>();
    auto t = threshold.mutable_unchecked<2>();
    auto a = adjacency.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < n; ++i)
        for (py::ssize_t j = 0; j < n; ++j) {
            l(i, j) = m.at(i, j);
            t(i, j) = m.threshold_at(i, j);
            a(i, j) = m.interacts(i, j);
        }
    py::dict d;
    d["lambda"] = lambda;
    d["threshold"] = threshold;
    d["adjacency"] = adjacency;
    d["eta"] = m.eta;
    d["fe_cost"] = m.fe_cost;
    d["edges"] = m.edge_count();
    return d;
}

CellSpec make_cell(const std::string& algorithm, const std::string& strategy, std::size_t population,
                   std::size_t max_fe) {
    auto a = parse_algorithm(algorithm);
    auto s = parse_strategy(strategy);
    if (!a) throw std::invalid_argument("unknown algorithm '" + algorithm + "'");
    if (!s) throw std::invalid_argument("unknown strategy '" + strategy + "'");
    return {*a, *s, {population, max_fe}};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Steel frame sizing with variable functioning";

    py::register_exception<FunctioningError>(m, "FunctioningError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<PlanError>(m, "PlanError", PyExc_RuntimeError);
    py::register_exception<SingularStiffnessError>(m, "SingularStiffnessError", PyExc_RuntimeError);

    py::class_<Evaluation>(m, "Evaluation")
        .def_readonly("objective", &Evaluation::objective)
        .def_readonly("violations", &Evaluation::violations)
        .def_readonly("normalized_violation", &Evaluation::normalized_violation)
        .def_readonly("feasible", &Evaluation::feasible)
        .def("__repr__", [](const Evaluation& e) {
            std::ostringstream s;
            s << "Evaluation(objective=" << e.objective << ", feasible=" << (e.feasible ? "True" : "False") << ")";
            return s.str();
        });

    py::class_<FunctioningRule>(m, "FunctioningRule")
        .def(py::init(&make_rule), py::arg("variable_ids"), py::arg("heights"))
        .def_readonly("variable_ids", &FunctioningRule::replaced_variable_ids)
        .def_readonly("heights", &FunctioningRule::heights);

    py::class_<Problem, std::shared_ptr<Problem>>(m, "Problem")
        .def_property_readonly("name", &Problem::name)
        .def_property_readonly("dimension", &Problem::dimension)
        .def_property_readonly("constraint_count", &Problem::constraint_count)
        .def_property_readonly("bounds",
                               [](const Problem& p) {
                                   std::vector<std::pair<double, double>> b;
                                   for (const auto& d : p.domains()) b.emplace_back(d.lower, d.upper);
                                   return b;
                               })
        .def("evaluate", [](const Problem& p, const std::vector<double>& x) { return p.evaluate(x); }, py::arg("x"))
        .def("full_design", [](const Problem& p, const std::vector<double>& x) { return p.full_design(x); },
             py::arg("x"))
        .def("design_areas",
             [](const Problem& p, const std::vector<double>& full) { return p.full_problem().design_areas(full); },
             py::arg("full"));

    py::class_<ProblemBundle>(m, "ProblemBundle")
        .def_readonly("name", &ProblemBundle::name)
        .def_property_readonly("problem",
                               [](const ProblemBundle& b) { return std::const_pointer_cast<Problem>(b.problem); })
        .def_readonly("rules", &ProblemBundle::rules)
        .def_property_readonly("reduced_dimension", [](const ProblemBundle& b) {
            return reduced_dimension(b.rules, b.problem->dimension());
        });

    m.def(
        "stepped_column",
        [](std::size_t segments, std::vector<double> catalog_radii) {
            SteppedColumnSpec spec;
            spec.segment_count = segments;
            spec.catalog_radii = std::move(catalog_radii);
            return stepped_column_bundle(spec);
        },
        py::arg("segments") = 50, py::arg("catalog_radii") = std::vector<double>{});
    m.def("sphere", &sphere_bundle, py::arg("n"));
    m.def("frame", &frame_bundle, py::arg("config_path"));

    m.def("alpha_max", &alpha_max, py::arg("value_min"), py::arg("value_max"), py::arg("top_height"));
    m.def("expand_continuous",
          [](double base, double alpha, const std::vector<double>& h) { return expand_continuous(base, alpha, h); },
          py::arg("base"), py::arg("alpha"), py::arg("heights"));
    m.def("reduced_dimension",
          [](const std::vector<FunctioningRule>& rules, std::size_t n) { return reduced_dimension(rules, n); },
          py::arg("rules"), py::arg("n"));
    m.def(
        "reduce",
        [](const ProblemBundle& b) { return std::const_pointer_cast<Problem>(ProblemPtr(wrap_objective(b.problem, b.rules))); },
        py::arg("bundle"), "Reduced-space view of a bundle under its functioning rules");

    m.def("column_curve_ratio", &column_curve_ratio, py::arg("slenderness"));
    m.def("lrfd_interaction", &lrfd_interaction, py::arg("axial_ratio"), py::arg("flexure_ratio"));

    m.def(
        "interactions",
        [](const ProblemBundle& b, double eta, double penalty) {
            if (!b.relaxation) throw std::invalid_argument(b.name + " has no continuous relaxation");
            return interaction_dict(problem_interactions(b.relaxation, eta, penalty));
        },
        py::arg("bundle"), py::arg("eta") = kDefaultInteractionEta, py::arg("penalty") = 1.0);
    m.def(
        "interaction_matrix",
        [](const std::function<double(std::vector<double>)>& f, const std::vector<double>& lower,
           const std::vector<double>& upper, double eta) {
            const ScalarFunction g = [&f](std::span<const double> x) {
                return f(std::vector<double>(x.begin(), x.end()));
            };
            return interaction_dict(interaction_matrix(g, lower, upper, eta));
        },
        py::arg("f"), py::arg("lower"), py::arg("upper"), py::arg("eta") = kDefaultInteractionEta);

    m.def(
        "analyze_frame",
        [](const std::filesystem::path& config, const std::vector<double>& design) {
            auto p = frame_problem(config);
            const auto asg = p->assignment(design);
            AnalysisResult r;
            {
                py::gil_scoped_release release;
                r = analyze(p->config().model, asg);
            }
            const Evaluation e = evaluate_frame(p->config(), asg);
            py::dict d;
            d["displacements"] = r.displacements;
            d["reactions"] = r.reactions;
            d["story_drifts"] = r.story_drifts;
            d["max_lateral_displacement"] = r.max_lateral_displacement;
            d["weight"] = e.objective;
            d["violations"] = e.violations;
            d["feasible"] = e.feasible;
            return d;
        },
        py::arg("config_path"), py::arg("design"));

    m.def(
        "run_trial_json",
        [](const ProblemBundle& b, const std::string& algorithm, const std::string& strategy, std::uint64_t seed,
           std::size_t population, std::size_t max_fe) {
            const CellSpec cell = make_cell(algorithm, strategy, population, max_fe);
            py::gil_scoped_release release;
            return to_json(run_trial(b, cell, seed)).dump();
        },
        py::arg("bundle"), py::arg("algorithm"), py::arg("strategy"), py::arg("seed"), py::arg("population"),
        py::arg("max_fe"));

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::vector<std::string> argv_s = {"framefx"};
            argv_s.insert(argv_s.end(), args.begin(), args.end());
            std::vector<const char*> argv;
            for (const auto& a : argv_s) argv.push_back(a.c_str());
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs a command line; returns (exit code, stdout, stderr)");
    m.def("data_dir", [] { return cli::data_dir(); });
}
