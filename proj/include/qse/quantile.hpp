#ifndef QSE_QUANTILE_HPP
#define QSE_QUANTILE_HPP

#include <span>
#include <vector>

namespace qse {

// Ordered probability levels in (0,1), strictly increasing.
class QuantileGrid {
public:
    explicit QuantileGrid(std::vector<double> levels);

    const std::vector<double>& levels() const { return levels_; }
    std::size_t size() const { return levels_.size(); }
    double operator[](std::size_t i) const { return levels_[i]; }

private:
    std::vector<double> levels_;
};

// The study grid: 0.001..0.009 by 0.001, 0.01..0.09 by 0.01,
// 0.1..0.9 by 0.1, 0.91..0.99 by 0.01, 0.991..0.999 by 0.001.
// 45 distinct levels, symmetric about 0.5.
QuantileGrid paper_grid();

// Midpoint cumulative-probability estimator (Matlab's default, Langford 2006):
// order statistic x(k) carries probability (k - 0.5)/N, linear interpolation
// in between, clamped to x(1) / x(N) outside.
double quantile_sorted(std::span<const double> sorted, double p);

// As above for a whole grid; `sorted` must be ascending.
void quantiles_sorted(std::span<const double> sorted, const QuantileGrid& grid,
                      std::span<double> out);

// Convenience wrapper: copies and sorts the sample once, then evaluates
// every grid level. Throws std::invalid_argument on an empty sample.
std::vector<double> estimate_quantiles(std::span<const double> sample,
                                       const QuantileGrid& grid);

} // namespace qse

#endif
