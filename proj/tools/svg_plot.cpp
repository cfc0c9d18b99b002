#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace rkl::tools {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 72;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 36;
constexpr int kMarginBottom = 56;
constexpr std::size_t kMaxPointsPerCurve = 500;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string render_svg(const SvgPlot& plot) {
    double xmax = 1.0, ymax = plot.dashed_y;
    for (const auto& c : plot.curves) {
        for (double x : c.xs) xmax = std::max(xmax, x);
        for (double y : c.ys) {
            if (std::isfinite(y)) ymax = std::max(ymax, y);
        }
    }
    ymax = ymax > 0.0 ? 1.12 * ymax : 1.0;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto px = [&](double x) { return kMarginLeft + x / xmax * plot_w; };
    const auto py = [&](double y) { return kMarginTop + (1.0 - y / ymax) * plot_h; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
           "\" height=\"" + std::to_string(kHeight) + "\" viewBox=\"0 0 " +
           std::to_string(kWidth) + " " + std::to_string(kHeight) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(kWidth) + "\" height=\"" +
           std::to_string(kHeight) + "\" fill=\"white\"/>\n";

    if (!plot.title.empty()) {
        svg += "<text x=\"" + num(kWidth / 2.0) + "\" y=\"22\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"14\">" + plot.title + "</text>\n";
    }

    // axes
    svg += "<line x1=\"" + num(kMarginLeft) + "\" y1=\"" + num(py(0.0)) + "\" x2=\"" +
           num(kWidth - kMarginRight) + "\" y2=\"" + num(py(0.0)) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + num(kMarginLeft) + "\" y1=\"" + num(kMarginTop) + "\" x2=\"" +
           num(kMarginLeft) + "\" y2=\"" + num(py(0.0)) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    // ticks and labels
    for (int t = 0; t <= 5; ++t) {
        const double xv = xmax * t / 5.0;
        const double yv = ymax * t / 5.0;
        svg += "<line x1=\"" + num(px(xv)) + "\" y1=\"" + num(py(0.0)) + "\" x2=\"" + num(px(xv)) +
               "\" y2=\"" + num(py(0.0) + 5) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(py(0.0) + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               num(xv) + "</text>\n";
        svg += "<line x1=\"" + num(kMarginLeft - 5.0) + "\" y1=\"" + num(py(yv)) + "\" x2=\"" +
               num(kMarginLeft) + "\" y2=\"" + num(py(yv)) +
               "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + num(kMarginLeft - 9.0) + "\" y=\"" + num(py(yv) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num(yv) +
               "</text>\n";
    }
    svg += "<text x=\"" + num(kMarginLeft + plot_w / 2.0) + "\" y=\"" +
           num(kHeight - 12.0) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\">" + plot.x_label + "</text>\n";
    svg += "<text x=\"18\" y=\"" + num(kMarginTop + plot_h / 2.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 " + num(kMarginTop + plot_h / 2.0) + ")\">" +
           plot.y_label + "</text>\n";

    for (const auto& c : plot.curves) {
        const std::size_t n = std::min(c.xs.size(), c.ys.size());
        const std::size_t stride = n > kMaxPointsPerCurve ? (n + kMaxPointsPerCurve - 1) / kMaxPointsPerCurve : 1;
        svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.9\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < n; i += stride) {
            if (!std::isfinite(c.ys[i])) continue;
            if (!first) svg += " ";
            svg += num(px(c.xs[i])) + "," + num(py(std::min(c.ys[i], ymax)));
            first = false;
        }
        if (n > 0 && (n - 1) % stride != 0 && std::isfinite(c.ys[n - 1])) {
            svg += " " + num(px(c.xs[n - 1])) + "," + num(py(std::min(c.ys[n - 1], ymax)));
        }
        svg += "\"/>\n";
    }

    svg += "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.4\" "
           "stroke-dasharray=\"7,5\" points=\"" +
           num(px(0.0)) + "," + num(py(plot.dashed_y)) + " " + num(px(xmax)) + "," +
           num(py(plot.dashed_y)) + "\"/>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace rkl::tools
