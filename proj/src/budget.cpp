#include "framefx/budget.hpp"

namespace framefx {

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::none: return "none";
        case Strategy::ifx: return "ifx";
        case Strategy::fx: return "fx";
    }
    return "none";
}

std::optional<Strategy> parse_strategy(std::string_view text) {
    for (Strategy s : kAllStrategies)
        if (to_string(s) == text) return s;
    return std::nullopt;
}

}  // namespace framefx
