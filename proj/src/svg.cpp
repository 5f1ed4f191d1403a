#include "qse/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace qse {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#7f7f7f", "#17becf", "#bcbd22"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    if (v != 0.0 && (std::fabs(v) >= 1e4 || std::fabs(v) < 1e-3))
        std::snprintf(buf, sizeof(buf), "%.1e", v);
    else
        std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

} // namespace

std::string render_svg_plot(const std::vector<PlotSeries>& series, const PlotOptions& opt) {
    const double ml = 70, mr = 20, mt = 40, mb = 55;
    const double pw = opt.width - ml - mr;
    const double ph = opt.height - mt - mb;

    auto tx = [&](double v) { return opt.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return opt.log_y ? std::log10(v) : v; };

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if ((opt.log_x && x <= 0) || (opt.log_y && y <= 0)) continue;
            xmin = std::min(xmin, tx(x));
            xmax = std::max(xmax, tx(x));
            ymin = std::min(ymin, ty(y));
            ymax = std::max(ymax, ty(y));
        }
    if (!(xmin < xmax)) { xmin -= 0.5; xmax += 0.5; }
    if (!(ymin < ymax)) { ymin -= 0.5; ymax += 0.5; }
    const double xpad = 0.03 * (xmax - xmin);
    const double ypad = 0.05 * (ymax - ymin);
    xmin -= xpad; xmax += xpad;
    ymin -= ypad; ymax += ypad;

    auto px = [&](double v) { return ml + (tx(v) - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double v) { return mt + ph - (ty(v) - ymin) / (ymax - ymin) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) +
           "\" height=\"" + std::to_string(opt.height) + "\" font-family=\"sans-serif\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + num(opt.width / 2.0) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-size=\"16\">" + opt.title + "</text>\n";
    svg += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(pw) +
           "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

    // 5 evenly spaced ticks in transformed coordinates
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        const double vx = opt.log_x ? std::pow(10.0, fx) : fx;
        const double vy = opt.log_y ? std::pow(10.0, fy) : fy;
        const double gx = ml + pw * i / 4.0;
        const double gy = mt + ph - ph * i / 4.0;
        svg += "<line x1=\"" + num(gx) + "\" y1=\"" + num(mt + ph) + "\" x2=\"" + num(gx) +
               "\" y2=\"" + num(mt + ph + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + num(gx) + "\" y=\"" + num(mt + ph + 20) +
               "\" text-anchor=\"middle\" font-size=\"11\">" + tick_label(vx) + "</text>\n";
        svg += "<line x1=\"" + num(ml - 5) + "\" y1=\"" + num(gy) + "\" x2=\"" + num(ml) +
               "\" y2=\"" + num(gy) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + num(ml - 8) + "\" y=\"" + num(gy + 4) +
               "\" text-anchor=\"end\" font-size=\"11\">" + tick_label(vy) + "</text>\n";
    }
    svg += "<text x=\"" + num(ml + pw / 2) + "\" y=\"" + num(opt.height - 12.0) +
           "\" text-anchor=\"middle\" font-size=\"13\">" + opt.x_label + "</text>\n";
    svg += "<text x=\"16\" y=\"" + num(mt + ph / 2) +
           "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " +
           num(mt + ph / 2) + ")\">" + opt.y_label + "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::string pts;
        for (const auto& [x, y] : series[s].points) {
            if ((opt.log_x && x <= 0) || (opt.log_y && y <= 0)) continue;
            pts += num(px(x)) + "," + num(py(y)) + " ";
        }
        svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"1.5\"/>\n";
        const double lx = ml + pw - 150;
        const double ly = mt + 16 + 16.0 * static_cast<double>(s);
        svg += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
               num(lx + 24) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color +
               "\" stroke-width=\"1.5\"/>\n";
        svg += "<text x=\"" + num(lx + 30) + "\" y=\"" + num(ly) + "\" font-size=\"11\">" +
               series[s].name + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace qse
