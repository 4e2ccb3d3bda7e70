#pragma once

#include <string>
#include <vector>

namespace ruenergy::plot {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    bool scatter = false;
};

struct Figure {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    bool equal_axes = false;
    std::vector<Series> series;
};

/// Static SVG rendering. Non-finite points are skipped and break lines.
std::string render_svg(const Figure& fig);
void write_svg(const Figure& fig, const std::string& path);

} // namespace ruenergy::plot
