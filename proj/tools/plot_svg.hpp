#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Minimal static SVG line plots for rejection-rate, deviation, and decision
// curves. No dependencies; output is deterministic for identical input.

namespace jumpcp_cli {

struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;  // ascending x expected
};

namespace plot_detail {

inline std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string num(double value) {
    char buffer[48];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

}  // namespace plot_detail

inline void write_svg_plot(const std::string& file, const std::string& title,
                           const std::string& x_label, const std::string& y_label,
                           const std::vector<PlotSeries>& series) {
    using plot_detail::escape;
    using plot_detail::num;

    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b", "#17becf", "#e377c2"};
    constexpr int kColors = 8;
    constexpr double kWidth = 760.0, kHeight = 480.0;
    constexpr double kLeft = 64.0, kRight = 24.0, kTop = 48.0, kBottom = 56.0;

    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool any = false;
    for (const PlotSeries& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!any) {
                x_min = x_max = x;
                y_min = y_max = y;
                any = true;
            }
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (x_max - x_min <= 0.0) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if (y_max - y_min <= 0.0) {
        y_min -= 0.5;
        y_max += 0.5;
    }
    const double x_pad = 0.04 * (x_max - x_min);
    const double y_pad = 0.08 * (y_max - y_min);
    x_min -= x_pad;
    x_max += x_pad;
    y_min -= y_pad;
    y_max += y_pad;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    const auto py = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * plot_h; };

    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open for writing: " + file);

    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
        << "' viewBox='0 0 " << kWidth << ' ' << kHeight << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << kWidth / 2 << "' y='28' font-family='sans-serif' font-size='17' "
           "text-anchor='middle'>"
        << escape(title) << "</text>\n";

    // Frame and ticks.
    out << "<rect x='" << kLeft << "' y='" << kTop << "' width='" << plot_w << "' height='"
        << plot_h << "' fill='none' stroke='#444' stroke-width='1'/>\n";
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double fx = x_min + (x_max - x_min) * i / kTicks;
        const double fy = y_min + (y_max - y_min) * i / kTicks;
        out << "<line x1='" << num(px(fx)) << "' y1='" << kTop + plot_h << "' x2='" << num(px(fx))
            << "' y2='" << kTop + plot_h + 5 << "' stroke='#444'/>\n";
        out << "<text x='" << num(px(fx)) << "' y='" << kTop + plot_h + 20
            << "' font-family='sans-serif' font-size='12' text-anchor='middle'>" << num(fx)
            << "</text>\n";
        out << "<line x1='" << kLeft - 5 << "' y1='" << num(py(fy)) << "' x2='" << kLeft
            << "' y2='" << num(py(fy)) << "' stroke='#444'/>\n";
        out << "<text x='" << kLeft - 9 << "' y='" << num(py(fy) + 4)
            << "' font-family='sans-serif' font-size='12' text-anchor='end'>" << num(fy)
            << "</text>\n";
    }
    out << "<text x='" << kLeft + plot_w / 2 << "' y='" << kHeight - 12
        << "' font-family='sans-serif' font-size='13' text-anchor='middle'>" << escape(x_label)
        << "</text>\n";
    out << "<text x='16' y='" << kTop + plot_h / 2
        << "' font-family='sans-serif' font-size='13' text-anchor='middle' transform='rotate(-90 "
           "16 "
        << kTop + plot_h / 2 << ")'>" << escape(y_label) << "</text>\n";

    // Series and legend.
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % kColors];
        const PlotSeries& line = series[s];
        if (!line.points.empty()) {
            out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.8' points='";
            for (const auto& [x, y] : line.points) out << num(px(x)) << ',' << num(py(y)) << ' ';
            out << "'/>\n";
            for (const auto& [x, y] : line.points)
                out << "<circle cx='" << num(px(x)) << "' cy='" << num(py(y)) << "' r='2.6' fill='"
                    << color << "'/>\n";
        }
        const double ly = kTop + 16.0 + 16.0 * static_cast<double>(s);
        out << "<line x1='" << kLeft + 10 << "' y1='" << num(ly - 4) << "' x2='" << kLeft + 34
            << "' y2='" << num(ly - 4) << "' stroke='" << color << "' stroke-width='1.8'/>\n";
        out << "<text x='" << kLeft + 40 << "' y='" << num(ly)
            << "' font-family='sans-serif' font-size='12'>" << escape(line.name) << "</text>\n";
    }

    out << "</svg>\n";
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + file);
}

}  // namespace jumpcp_cli
