#ifndef QSE_SVG_HPP
#define QSE_SVG_HPP

#include <string>
#include <utility>
#include <vector>

namespace qse {

struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    int width = 760;
    int height = 520;
};

// Minimal self-contained SVG line plot: frame, ticks, polylines, legend.
// Figures exist for visual checks against reference plots, nothing more.
std::string render_svg_plot(const std::vector<PlotSeries>& series, const PlotOptions& opt);

} // namespace qse

#endif
