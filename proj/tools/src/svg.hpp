#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace ionchain::cli {

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct PlotOptions {
    std::string x_label = "x";
    std::string y_label = "y";
    bool log_x = false;
    bool log_y = false;
    int width = 800;
    int height = 560;
};

/** Write a standalone SVG line plot: one polyline per series, axes with tick
    labels, and a legend. Output bytes are a pure function of the inputs
    (fixed-precision coordinate formatting, no timestamps). Throws
    std::invalid_argument for empty input or non-positive values on a log
    axis, and std::runtime_error when the file cannot be written.
*/
void write_svg_plot(const std::vector<PlotSeries>& series, const PlotOptions& options,
                    const std::filesystem::path& path);

} // namespace ionchain::cli
