#ifndef QSE_REFERENCE_HPP
#define QSE_REFERENCE_HPP

#include <array>

namespace qse::reference {

// Published scaling coefficients for the standard-parameter populations
// (Roy, Laprise, Gachon; Monte Carlo with 15 000 replicates).
inline constexpr std::array<double, 10> table1_levels = {
    0.001, 0.005, 0.01, 0.05, 0.1, 0.90, 0.95, 0.99, 0.995, 0.999};

inline constexpr std::array<double, 10> table1_normal_numerical = {
    7.82, 4.68, 3.65, 2.10, 1.71, 1.71, 2.10, 3.65, 4.68, 7.82};

inline constexpr std::array<double, 10> table1_normal_formula = {
    7.99, 4.62, 3.66, 2.17, 1.76, 1.76, 2.17, 3.66, 4.62, 7.99};

inline constexpr std::array<double, 10> table1_gamma_numerical = {
    0.043, 0.075, 0.10, 0.23, 0.33, 2.99, 4.34, 9.77, 13.61, 27.24};

inline constexpr std::array<double, 10> table1_gamma_formula = {
    0.042, 0.091, 0.13, 0.27, 0.39, 3.06, 4.35, 9.45, 13.12, 28.00};

// decimal places the reference table prints per gamma formula entry
inline constexpr std::array<int, 10> table1_gamma_formula_decimals = {3, 3, 2, 2, 2,
                                                                      2, 2, 2, 2, 2};

// minimum sample sizes for reliable extreme-quantile standard errors
// (normal population): N ~ 55 for p >= 0.99, N ~ 550 for p >= 0.999,
// mirrored at the low tail
inline constexpr long n_min_q99 = 55;
inline constexpr long n_min_q999 = 550;

} // namespace qse::reference

#endif
