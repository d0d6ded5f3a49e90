#pragma once

// Minimal SVG line charts for sweep outputs.

#include <string>
#include <vector>

namespace krc {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    /// Plot log10(y); non-positive values are dropped.
    bool log_y = false;
    std::vector<PlotSeries> series;
};

std::string render_svg(const PlotSpec& plot);

} // namespace krc
