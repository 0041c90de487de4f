// Minimal self-contained SVG charts.
#pragma once

#include <string>
#include <vector>

#include "vdyn/sensitivity.hpp"

namespace vdyn {

struct LineSeries {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
};

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<LineSeries>& series);

/// Horizontal bars in table order with dashed lines at +/- threshold.
std::string tornado_svg(const std::string& title, const std::vector<TornadoRow>& rows,
                        double threshold);

}  // namespace vdyn
