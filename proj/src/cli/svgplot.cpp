#include "svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace coldatom::cli {

namespace {

constexpr double kWidth = 800, kHeight = 560;
constexpr double kLeft = 78, kRight = 24, kTop = 40, kBottom = 56;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, std::span<const Series> series,
                           std::span<const Marker> markers) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const Series& s : series) {
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) ymax = ymin + 1;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * plot_h; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
           "font-family=\"sans-serif\">"
        << title << "</text>\n";

    // frame and ticks
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 4;
        const double yv = ymin + (ymax - ymin) * i / 4;
        out << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << kTop + plot_h << "\" x2=\""
            << num(px(xv)) << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(px(xv)) << "\" y=\"" << kTop + plot_h + 20
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << num(xv)
            << "</text>\n";
        out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(py(yv)) << "\" x2=\"" << kLeft
            << "\" y2=\"" << num(py(yv)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(py(yv) + 4)
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << num(yv)
            << "</text>\n";
    }
    out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << x_label
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << kTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
           "transform=\"rotate(-90 18 "
        << kTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

    double legend_y = kTop + 16;
    for (const Series& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : s.points) out << num(px(x)) << "," << num(py(y)) << " ";
        out << "\"/>\n";
        out << "<line x1=\"" << kLeft + plot_w - 150 << "\" y1=\"" << legend_y << "\" x2=\""
            << kLeft + plot_w - 120 << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << kLeft + plot_w - 114 << "\" y=\"" << legend_y + 4
            << "\" font-size=\"12\" font-family=\"sans-serif\">" << s.label << "</text>\n";
        legend_y += 18;
    }
    for (const Marker& m : markers) {
        out << "<circle cx=\"" << num(px(m.x)) << "\" cy=\"" << num(py(m.y))
            << "\" r=\"4\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << num(px(m.x) + 8) << "\" y=\"" << num(py(m.y) - 8)
            << "\" font-size=\"12\" font-family=\"sans-serif\">" << m.label << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace coldatom::cli
