#pragma once

#include <string>
#include <vector>

namespace pfk {

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

// Minimal static SVG line plot. Every figure's exact data always lives in a
// CSV next to it; this is a convenience layer only.
void write_line_plot_svg(const std::string& path, const std::string& title,
                         const std::string& xlabel, const std::string& ylabel,
                         const std::vector<PlotSeries>& series, bool log_y = false);

}  // namespace pfk
