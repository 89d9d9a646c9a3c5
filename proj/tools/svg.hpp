#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

// Minimal deterministic SVG plotting, enough for curve and sweep outputs.
namespace powprofit::svgplot {

struct Series {
    std::vector<std::pair<double, double>> points;
    std::string color = "#1f77b4";
};

namespace detail {

inline std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string fmt_tick(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

} // namespace detail

inline std::string line_chart(const std::vector<Series>& series, const std::string& x_label,
                              const std::string& y_label, const std::string& title)
{
    const double width = 800, height = 500;
    const double ml = 70, mr = 20, mt = 40, mb = 50;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series) {
        for (auto [x, y] : s.points) {
            if (first) {
                xmin = xmax = x;
                ymin = ymax = y;
                first = false;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    ymin = std::min(ymin, 0.0);
    ymax = std::max(ymax, 0.0);
    double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto py = [&](double y) { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
           "viewBox=\"0 0 800 500\">\n";
    out += "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
    out += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" + title + "</text>\n";

    // axes
    out += "<line x1=\"" + detail::fmt(ml) + "\" y1=\"" + detail::fmt(mt) + "\" x2=\"" +
           detail::fmt(ml) + "\" y2=\"" + detail::fmt(height - mb) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + detail::fmt(ml) + "\" y1=\"" + detail::fmt(height - mb) + "\" x2=\"" +
           detail::fmt(width - mr) + "\" y2=\"" + detail::fmt(height - mb) +
           "\" stroke=\"black\"/>\n";
    // zero line
    if (ymin < 0 && ymax > 0) {
        out += "<line x1=\"" + detail::fmt(ml) + "\" y1=\"" + detail::fmt(py(0)) + "\" x2=\"" +
               detail::fmt(width - mr) + "\" y2=\"" + detail::fmt(py(0)) +
               "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
    }
    // ticks
    for (int i = 0; i <= 5; ++i) {
        double x = xmin + (xmax - xmin) * i / 5.0;
        double y = ymin + (ymax - ymin) * i / 5.0;
        out += "<text x=\"" + detail::fmt(px(x)) + "\" y=\"" + detail::fmt(height - mb + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::fmt_tick(x) + "</text>\n";
        out += "<text x=\"" + detail::fmt(ml - 6) + "\" y=\"" + detail::fmt(py(y) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::fmt_tick(y) + "</text>\n";
    }
    out += "<text x=\"" + detail::fmt((ml + width - mr) / 2) + "\" y=\"" +
           detail::fmt(height - 10) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + x_label +
           "</text>\n";
    out += "<text x=\"16\" y=\"" + detail::fmt((mt + height - mb) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 16 " + detail::fmt((mt + height - mb) / 2) + ")\">" + y_label +
           "</text>\n";

    for (const auto& s : series) {
        out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : s.points) out += detail::fmt(px(x)) + "," + detail::fmt(py(y)) + " ";
        out += "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

/// Region map over a (q, gamma) grid: one colored cell per grid point plus
/// overlaid boundary polylines.
inline std::string region_map(const std::vector<double>& q_grid,
                              const std::vector<double>& gamma_grid,
                              const std::vector<std::string>& cell_colors,
                              const std::vector<Series>& boundaries, const std::string& title)
{
    const double width = 800, height = 500;
    const double ml = 70, mr = 20, mt = 40, mb = 50;
    double qmin = q_grid.front(), qmax = q_grid.back();
    double gmin = gamma_grid.front(), gmax = gamma_grid.back();

    auto px = [&](double q) { return ml + (q - qmin) / (qmax - qmin) * (width - ml - mr); };
    auto py = [&](double g) { return height - mb - (g - gmin) / (gmax - gmin) * (height - mt - mb); };
    double cw = (width - ml - mr) / double(q_grid.size());
    double ch = (height - mt - mb) / double(gamma_grid.size());

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
           "viewBox=\"0 0 800 500\">\n";
    out += "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
    out += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" + title + "</text>\n";
    for (std::size_t gi = 0; gi < gamma_grid.size(); ++gi) {
        for (std::size_t qi = 0; qi < q_grid.size(); ++qi) {
            out += "<rect x=\"" + detail::fmt(px(q_grid[qi]) - cw / 2) + "\" y=\"" +
                   detail::fmt(py(gamma_grid[gi]) - ch / 2) + "\" width=\"" + detail::fmt(cw + 0.5) +
                   "\" height=\"" + detail::fmt(ch + 0.5) + "\" fill=\"" +
                   cell_colors[gi * q_grid.size() + qi] + "\"/>\n";
        }
    }
    for (const auto& s : boundaries) {
        out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"2\" points=\"";
        for (auto [q, g] : s.points) out += detail::fmt(px(q)) + "," + detail::fmt(py(g)) + " ";
        out += "\"/>\n";
    }
    out += "<text x=\"" + detail::fmt((ml + width - mr) / 2) + "\" y=\"" +
           detail::fmt(height - 10) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">q</text>\n";
    out += "<text x=\"16\" y=\"" + detail::fmt((mt + height - mb) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 16 " + detail::fmt((mt + height - mb) / 2) +
           ")\">gamma</text>\n";
    out += "</svg>\n";
    return out;
}

} // namespace powprofit::svgplot
