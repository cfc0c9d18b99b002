#pragma once

#include <string>
#include <vector>

namespace rkl::tools {

// Minimal hand-rolled SVG line plot: one solid polyline per curve plus one
// dashed horizontal reference line. Curves longer than 500 points are
// decimated by striding. Axes and ticks are drawn with <line>/<text>, so a
// figure with T curves contains exactly T+1 <polyline> elements.
struct SvgPlot {
    struct Curve {
        std::vector<double> xs;
        std::vector<double> ys;
    };

    std::vector<Curve> curves;
    double dashed_y = 0.0;
    std::string x_label = "k";
    std::string y_label = "rho_k";
    std::string title;
};

std::string render_svg(const SvgPlot& plot);

}  // namespace rkl::tools
