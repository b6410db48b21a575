#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace framefx {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;  // non-finite values break the line
};

struct ChartOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    double width = 640.0;
    double height = 420.0;
};

/// Static line chart with axes, five ticks per axis and a legend.
void write_line_chart(std::ostream& out, const std::vector<Series>& series, const ChartOptions& options);

}  // namespace framefx
