#pragma once
// Minimal deterministic SVG line charts: axes, tick labels, polylines, and
// optional point markers. No timestamps, no external plotting dependency,
// so outputs are byte-stable for fixed inputs.

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace coldatom::cli {

struct Series {
    std::string label;
    std::string color;  // e.g. "#1f77b4"
    std::vector<std::pair<double, double>> points;
};

struct Marker {
    double x, y;
    std::string label;
};

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, std::span<const Series> series,
                           std::span<const Marker> markers);

}  // namespace coldatom::cli
