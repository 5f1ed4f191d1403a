#ifndef QSE_MC_ENGINE_HPP
#define QSE_MC_ENGINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qse/distributions.hpp"
#include "qse/quantile.hpp"

namespace qse {

enum class NGridMode { PaperFull, Desk };

// PaperFull: every integer 10..8000. Desk: a 24-point log-spaced subset that
// still covers the low-N breakpoint region and the N >= 3000 fitting window.
std::vector<long> default_n_grid(NGridMode mode);

struct MCConfig {
    DistributionSpec spec;
    long replicates = 15000;
    std::vector<long> n_grid;
    QuantileGrid grid = paper_grid();
    std::uint64_t master_seed = 0;
    int workers = 0; // 0 = available parallelism

    void validate() const; // throws std::invalid_argument
};

// One record per (distribution, N, p).
struct StdErrRow {
    std::string dist;
    Family family = Family::Normal;
    double param1 = 0.0; // mu or shape k
    double param2 = 0.0; // sigma or scale theta
    long n = 0;
    double p = 0.0;
    double stderr_s = 0.0;      // std dev (divisor R-1) of per-replicate estimates
    double mean_estimate = 0.0; // mean of per-replicate estimates
    double s_bar = 0.0;         // mean per-replicate sample std dev at this (dist, N)
};

struct StdErrTable {
    std::vector<StdErrRow> rows; // sorted by (dist, N, p)
};

// One sweep point: R replicates of size n, quantiles per replicate,
// std dev across replicates. Deterministic given master_seed, independent
// of worker count.
std::vector<StdErrRow> stderr_for_size(const DistributionSpec& spec, long n,
                                       const QuantileGrid& grid, long replicates,
                                       std::uint64_t master_seed, std::size_t sweep_point,
                                       int workers = 0);

// stderr_for_size over every N in config.n_grid, concatenated.
StdErrTable sweep(const MCConfig& config);

} // namespace qse

#endif
