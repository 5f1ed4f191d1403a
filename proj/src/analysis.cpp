#include "qse/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qse {

namespace {

// (N, stderr) pairs for one (dist, p), ascending in N
std::vector<std::pair<long, double>> series_for(const StdErrTable& table,
                                                const std::string& dist, double p) {
    std::vector<std::pair<long, double>> out;
    for (const auto& row : table.rows)
        if (row.dist == dist && row.p == p) out.emplace_back(row.n, row.stderr_s);
    std::sort(out.begin(), out.end());
    return out;
}

LineFit ols_loglog(std::span<const std::pair<long, double>> pts) {
    const auto n = static_cast<double>(pts.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [N, se] : pts) {
        const double x = std::log10(static_cast<double>(N));
        const double y = std::log10(se);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept_log10 = (sy - fit.slope * sx) / n;
    fit.n_used = static_cast<long>(pts.size());
    return fit;
}

} // namespace

LineFit loglog_fit(const StdErrTable& table, const std::string& dist, double p,
                   long n_floor) {
    auto series = series_for(table, dist, p);
    std::erase_if(series, [&](const auto& pt) { return pt.first < n_floor; });
    if (series.size() < 3)
        throw std::invalid_argument("loglog_fit: fewer than 3 rows with N >= n_floor for " +
                                    dist);
    for (const auto& [N, se] : series) {
        (void)N;
        if (!(se > 0.0))
            throw std::invalid_argument("loglog_fit: non-positive stderr in table");
    }
    return ols_loglog(series);
}

std::pair<std::optional<long>, bool> detect_min_sample_size(const StdErrTable& table,
                                                            const std::string& dist,
                                                            double p,
                                                            const BreakpointRule& rule) {
    auto series = series_for(table, dist, p);
    const std::size_t w = static_cast<std::size_t>(rule.window);
    if (series.size() < 8 ||
        series.back().first < 10 * series.front().first)
        throw std::invalid_argument(
            "detect_min_sample_size: need >= 8 N values spanning a decade");

    const std::size_t n_windows = series.size() - w + 1;
    std::vector<bool> ok(n_windows);
    for (std::size_t i = 0; i < n_windows; ++i) {
        const LineFit fit = ols_loglog({series.data() + i, w});
        ok[i] = std::abs(fit.slope + 0.5) <= rule.slope_tol;
    }
    // first window index from which every window qualifies
    std::size_t start = n_windows;
    for (std::size_t i = n_windows; i-- > 0;) {
        if (!ok[i]) break;
        start = i;
    }
    if (start == n_windows) return {std::nullopt, false};
    if (start == 0) return {series.front().first, true};
    return {series[start].first, false};
}

ScalingResult extract_k(const StdErrTable& table, const DistributionSpec& spec, double p,
                        long n_floor, const BreakpointRule& rule) {
    const std::string dist = spec.label();
    const LineFit fit = loglog_fit(table, dist, p, n_floor);
    ScalingResult result;
    result.dist = dist;
    result.p = p;
    result.slope = fit.slope;
    result.intercept_log10 = fit.intercept_log10;
    result.k = std::pow(10.0, fit.intercept_log10) / theoretical_sigma(spec);
    result.n_used_for_fit = fit.n_used;
    auto [n_min, unconstrained] = detect_min_sample_size(table, dist, p, rule);
    result.n_min = n_min;
    result.n_min_unconstrained = unconstrained;
    return result;
}

double bootstrap_stderr(std::span<const double> sample, double p, long resamples,
                        RngStream stream) {
    if (sample.size() < 10)
        throw std::invalid_argument("bootstrap_stderr: sample length must be >= 10");
    if (resamples < 200)
        throw std::invalid_argument("bootstrap_stderr: B must be >= 200");

    const std::size_t n = sample.size();
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) return 0.0; // degenerate sample

    CounterRng rng(stream);
    std::vector<double> resample(n);
    std::vector<double> estimates(static_cast<std::size_t>(resamples));
    for (auto& est : estimates) {
        for (std::size_t i = 0; i < n; ++i) {
            // index from the top 53 bits; bias is negligible for n << 2^53
            const auto idx = static_cast<std::size_t>(rng.next_unit() * static_cast<double>(n));
            resample[i] = sorted[idx];
        }
        std::sort(resample.begin(), resample.end());
        est = quantile_sorted(resample, p);
    }

    double mean = 0.0;
    for (double e : estimates) mean += e;
    mean /= static_cast<double>(resamples);
    double ss = 0.0;
    for (double e : estimates) ss += (e - mean) * (e - mean);
    return std::sqrt(ss / static_cast<double>(resamples - 1));
}

} // namespace qse
