#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "framefx/budget.hpp"
#include "framefx/evaluate.hpp"
#include "framefx/fea.hpp"
#include "framefx/fx.hpp"
#include "framefx/problem.hpp"

namespace framefx {

/// Config problem tied to a location inside the document (JSON pointer).
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string pointer, const std::string& message)
        : std::runtime_error(pointer.empty() ? message : pointer + ": " + message), pointer_(std::move(pointer)) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

struct FrameConfig {
    std::string name;
    std::string provenance;
    FrameModel model;
    ConstraintSet constraints;
    std::vector<std::string> group_names;
    std::vector<std::shared_ptr<const SectionPool>> group_pools;
    std::vector<FunctioningRule> functioning;
    std::vector<ColumnStack> column_stacks;
    std::optional<StrategyBudgets> budgets;
};

/// Parses a frame document. Section table paths are resolved against base_dir.
FrameConfig parse_frame_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);

FrameConfig load_frame_config(const std::filesystem::path& path);

}  // namespace framefx
