#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace framefx {

/// How functioning rules take part in a run: not at all, only to seed the
/// initial population, or for the whole search.
enum class Strategy { none, ifx, fx };

inline constexpr std::array<Strategy, 3> kAllStrategies = {Strategy::none, Strategy::ifx, Strategy::fx};

std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view text);

struct CellBudget {
    std::size_t population = 25;
    std::size_t max_fe = 5000;
};

/// Population size and FE budget for each strategy, indexed by Strategy.
struct StrategyBudgets {
    std::array<CellBudget, 3> cells{CellBudget{25, 5000}, CellBudget{25, 5000}, CellBudget{20, 3000}};

    const CellBudget& operator[](Strategy s) const { return cells[static_cast<std::size_t>(s)]; }
    CellBudget& operator[](Strategy s) { return cells[static_cast<std::size_t>(s)]; }
};

}  // namespace framefx
