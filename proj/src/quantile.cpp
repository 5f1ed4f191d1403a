#include "qse/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qse {

QuantileGrid::QuantileGrid(std::vector<double> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) throw std::invalid_argument("QuantileGrid: empty grid");
    double prev = 0.0;
    for (double p : levels_) {
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("QuantileGrid: level outside (0,1)");
        if (!(p > prev))
            throw std::invalid_argument("QuantileGrid: levels must be strictly increasing");
        prev = p;
    }
}

QuantileGrid paper_grid() {
    std::vector<double> levels;
    levels.reserve(45);
    for (int i = 1; i <= 9; ++i) levels.push_back(i / 1000.0);
    for (int i = 1; i <= 9; ++i) levels.push_back(i / 100.0);
    for (int i = 1; i <= 9; ++i) levels.push_back(i / 10.0);
    for (int i = 91; i <= 99; ++i) levels.push_back(i / 100.0);
    for (int i = 991; i <= 999; ++i) levels.push_back(i / 1000.0);
    return QuantileGrid(std::move(levels));
}

double quantile_sorted(std::span<const double> sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 0) throw std::invalid_argument("quantile: empty sample");
    // h is the 1-based fractional rank solving (k - 0.5)/n = p
    const double h = p * static_cast<double>(n) + 0.5;
    if (h <= 1.0) return sorted.front();
    if (h >= static_cast<double>(n)) return sorted.back();
    const auto k = static_cast<std::size_t>(h); // floor; 1 <= k < n here
    const double frac = h - static_cast<double>(k);
    return sorted[k - 1] + frac * (sorted[k] - sorted[k - 1]);
}

void quantiles_sorted(std::span<const double> sorted, const QuantileGrid& grid,
                      std::span<double> out) {
    for (std::size_t i = 0; i < grid.size(); ++i)
        out[i] = quantile_sorted(sorted, grid[i]);
}

std::vector<double> estimate_quantiles(std::span<const double> sample,
                                       const QuantileGrid& grid) {
    if (sample.empty()) throw std::invalid_argument("estimate_quantiles: empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out(grid.size());
    quantiles_sorted(sorted, grid, out);
    return out;
}

} // namespace qse
