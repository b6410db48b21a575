#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "framefx/grouping.hpp"
#include "framefx/harness.hpp"

namespace framefx::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kRuntimeError = 2 };

struct ProblemArgs {
    std::string problem = "stepped-column";
    std::string config;  // frame config path; takes precedence over --problem
    std::size_t segments = 50;
    std::size_t dim = 5;
};

struct RunArgs {
    ProblemArgs problem;
    std::string algo = "all";
    std::string strategy = "all";
    std::size_t trials = 51;
    std::uint64_t seed = 0;
    std::optional<std::size_t> pop;
    std::optional<std::size_t> max_fe;
    std::size_t jobs = 0;  // 0: logical cores
    std::string out;
    std::string name;
};

struct InteractionArgs {
    ProblemArgs problem;
    double eta = kDefaultInteractionEta;
    double penalty = 1.0;
    std::string out;
};

/// Directory holding shipped data (sections, frames).
std::filesystem::path data_dir();

/// Output root: the flag when given, else $FRAMEFX_OUT, else ./results.
std::filesystem::path output_root(const std::string& flag);

ProblemBundle resolve_problem(const ProblemArgs& args);

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err);
int cmd_interactions(const InteractionArgs& args, std::ostream& out, std::ostream& err);
int cmd_plot(const std::filesystem::path& results, std::ostream& out, std::ostream& err);
int cmd_validate(const std::filesystem::path& config, std::ostream& out, std::ostream& err);
int cmd_sections(const std::string& pool, bool list, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace framefx::cli
