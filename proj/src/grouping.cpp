#include "framefx/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

namespace framefx {

std::size_t InteractionMatrix::edge_count() const {
    std::size_t e = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) e += interacts(i, j) ? 1 : 0;
    return e;
}

InteractionMatrix interaction_matrix(const ScalarFunction& f, std::span<const double> lower,
                                     std::span<const double> upper, double eta) {
    const std::size_t n = lower.size();
    if (n < 2) throw std::invalid_argument("interaction analysis needs at least two variables");
    if (upper.size() != n) throw std::invalid_argument("bound vectors differ in length");
    if (!(eta >= 0.0)) throw std::invalid_argument("eta must be non-negative");

    InteractionMatrix m;
    m.n = n;
    m.eta = eta;
    m.lambda.assign(n * n, 0.0);
    m.adjacency.assign(n * n, false);
    m.threshold.assign(n * n, 0.0);

    std::vector<double> mid(n);
    for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (lower[i] + upper[i]);

    auto probe = [&](std::vector<double> x) {
        double y;
        try {
            y = f(x);
        } catch (const std::exception& e) {
            throw InteractionError(x, std::string("evaluation failed: ") + e.what());
        }
        ++m.fe_cost;
        if (!std::isfinite(y)) throw InteractionError(std::move(x), "evaluation returned a non-finite value");
        return y;
    };

    const std::vector<double> base(lower.begin(), lower.end());
    const double f0 = probe(base);
    std::vector<double> fi(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto x = base;
        x[i] = mid[i];
        fi[i] = probe(std::move(x));
    }
    for (std::size_t i = 0; i < n; ++i) {
        m.adjacency[i * n + i] = true;
        for (std::size_t j = i + 1; j < n; ++j) {
            auto x = base;
            x[i] = mid[i];
            x[j] = mid[j];
            const double fij = probe(std::move(x));
            const double lam = std::abs((fij - fi[j]) - (fi[i] - f0));
            const double scale = std::max({1.0, std::abs(f0), std::abs(fi[i]), std::abs(fi[j]), std::abs(fij)});
            const double thr = eta * scale;
            for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
                m.lambda[a * n + b] = lam;
                m.threshold[a * n + b] = thr;
                m.adjacency[a * n + b] = lam > thr;
            }
        }
    }
    return m;
}

ScalarFunction penalized_objective(ProblemPtr problem, double penalty) {
    if (!problem) throw std::invalid_argument("penalized_objective needs a problem");
    return [problem = std::move(problem), penalty](std::span<const double> x) {
        const Evaluation e = problem->evaluate(x);
        double sum = 0.0;
        for (double g : e.violations) sum += std::max(g, 0.0);
        return e.objective * (1.0 + penalty * sum);
    };
}

InteractionMatrix problem_interactions(ProblemPtr problem, double eta, double penalty) {
    std::vector<double> lo, hi;
    for (const auto& d : problem->domains()) {
        lo.push_back(d.lower);
        hi.push_back(d.upper);
    }
    return interaction_matrix(penalized_objective(std::move(problem), penalty), lo, hi, eta);
}

void write_matrix_csv(const InteractionMatrix& m, std::ostream& out) {
    out << std::setprecision(17);
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = 0; j < m.n; ++j) out << (j ? "," : "") << m.at(i, j);
        out << '\n';
    }
}

int matrix_gray_level(const InteractionMatrix& m, std::size_t i, std::size_t j) {
    if (i == j) return 0;
    if (!m.interacts(i, j)) return 255;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t a = 0; a < m.n; ++a)
        for (std::size_t b = 0; b < m.n; ++b)
            if (a != b && m.interacts(a, b)) {
                lo = std::min(lo, m.at(a, b));
                hi = std::max(hi, m.at(a, b));
            }
    const double t = hi > lo ? (std::log(m.at(i, j)) - std::log(lo)) / (std::log(hi) - std::log(lo)) : 1.0;
    return static_cast<int>(std::lround(200.0 * (1.0 - t)));
}

void write_matrix_svg(const InteractionMatrix& m, std::ostream& out, double cell) {
    const double margin = 24.0;
    const double side = cell * static_cast<double>(m.n);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << side + 2 * margin << "\" height=\""
        << side + 2 * margin << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = 0; j < m.n; ++j) {
            const int g = matrix_gray_level(m, i, j);
            out << "<rect x=\"" << margin + cell * j << "\" y=\"" << margin + cell * i << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\"rgb(" << g << ',' << g << ',' << g << ")\"/>\n";
        }
    }
    out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << side << "\" height=\"" << side
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < m.n; ++i) {
        out << "<text x=\"" << margin - 4 << "\" y=\"" << margin + cell * (i + 0.7)
            << "\" font-size=\"9\" text-anchor=\"end\">" << i + 1 << "</text>\n";
        out << "<text x=\"" << margin + cell * (i + 0.5) << "\" y=\"" << margin - 6
            << "\" font-size=\"9\" text-anchor=\"middle\">" << i + 1 << "</text>\n";
    }
    out << "</svg>\n";
}

void render_matrix(const InteractionMatrix& m, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream csv(dir / "interactions.csv");
    std::ofstream svg(dir / "interactions.svg");
    if (!csv || !svg) throw std::runtime_error("cannot write interaction artifacts in " + dir.string());
    write_matrix_csv(m, csv);
    write_matrix_svg(m, svg);
    if (!csv || !svg) throw std::runtime_error("failed writing interaction artifacts in " + dir.string());
}

}  // namespace framefx
