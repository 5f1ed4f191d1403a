#ifndef QSE_ANALYSIS_HPP
#define QSE_ANALYSIS_HPP

#include <optional>
#include <string>

#include "qse/mc_engine.hpp"

namespace qse {

// Windowed-slope breakpoint rule: a window of `window` consecutive grid
// points has to fit N^(-1/2) within `slope_tol` from its start onward.
struct BreakpointRule {
    int window = 5;
    double slope_tol = 0.08;
};

struct LineFit {
    double slope = 0.0;
    double intercept_log10 = 0.0;
    long n_used = 0; // points entering the fit
};

// Per-quantile scaling summary extracted from a sweep table.
// K comes from the OLS intercept extrapolated to log10(N) = 0, so small
// slope errors are amplified about twentyfold; extraction wants a dense
// N coverage above n_floor (sparse tables give K only to several percent).
struct ScalingResult {
    std::string dist;
    double p = 0.0;
    double slope = 0.0;
    double intercept_log10 = 0.0;
    double k = 0.0; // 10^intercept / theoretical sigma
    std::optional<long> n_min;
    bool n_min_unconstrained = false; // first window already on the power law
    long n_used_for_fit = 0;
};

// OLS of log10(stderr) against log10(N), restricted to N >= n_floor.
// Throws std::invalid_argument with fewer than 3 usable rows.
LineFit loglog_fit(const StdErrTable& table, const std::string& dist, double p,
                   long n_floor);

// Breakpoint: smallest grid N whose local slope window, and every later
// window, lies within rule.slope_tol of -1/2. nullopt when no window
// qualifies. When the very first window qualifies the table minimum is
// returned with the unconstrained flag set (second member of the pair).
std::pair<std::optional<long>, bool> detect_min_sample_size(const StdErrTable& table,
                                                            const std::string& dist,
                                                            double p,
                                                            const BreakpointRule& rule = {});

ScalingResult extract_k(const StdErrTable& table, const DistributionSpec& spec, double p,
                        long n_floor = 3000, const BreakpointRule& rule = {});

// Standard deviation over B with-replacement resamples of the midpoint-rule
// quantile at level p. Deterministic given the stream. A constant sample
// yields 0 rather than an error.
double bootstrap_stderr(std::span<const double> sample, double p, long resamples,
                        RngStream stream);

} // namespace qse

#endif
