#include "qse/mc_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace qse {

std::vector<long> default_n_grid(NGridMode mode) {
    if (mode == NGridMode::PaperFull) {
        std::vector<long> grid(8000 - 10 + 1);
        for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = 10 + static_cast<long>(i);
        return grid;
    }
    return {10,  14,  20,  28,   40,   55,   80,   110,  160,  220,  320,  450,
            640, 900, 1300, 1800, 2500, 3000, 3600, 4300, 5200, 6200, 7400, 8000};
}

void MCConfig::validate() const {
    spec.validate();
    if (replicates < 2)
        throw std::invalid_argument("MCConfig: replicates must be >= 2");
    if (n_grid.empty())
        throw std::invalid_argument("MCConfig: empty n_grid");
    long prev = 0;
    for (long n : n_grid) {
        if (n < 10) throw std::invalid_argument("MCConfig: every N must be >= 10");
        if (n <= prev) throw std::invalid_argument("MCConfig: n_grid must be strictly increasing");
        prev = n;
    }
}

namespace {

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QSE_WORKERS")) {
        int w = std::atoi(env);
        if (w > 0) return w;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// sample standard deviation, divisor n-1
double sample_sd(const std::vector<double>& x) {
    const std::size_t n = x.size();
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

} // namespace

std::vector<StdErrRow> stderr_for_size(const DistributionSpec& spec, long n,
                                       const QuantileGrid& grid, long replicates,
                                       std::uint64_t master_seed, std::size_t sweep_point,
                                       int workers) {
    if (n < 10) throw std::invalid_argument("stderr_for_size: N must be >= 10");
    if (replicates < 2) throw std::invalid_argument("stderr_for_size: R must be >= 2");
    spec.validate();

    const std::size_t r_count = static_cast<std::size_t>(replicates);
    const std::size_t g_count = grid.size();

    // One row of per-replicate quantiles per replicate, plus per-replicate S.
    // Workers fill disjoint rows; the reduction below runs in replicate order,
    // so the result is bit-identical for any worker count.
    std::vector<double> quantile_matrix(r_count * g_count);
    std::vector<double> rep_sd(r_count);

    const int nworkers = resolve_workers(workers);
    std::atomic<std::size_t> next_rep{0};

    auto run_worker = [&]() {
        std::vector<double> buffer(static_cast<std::size_t>(n));
        for (;;) {
            const std::size_t r = next_rep.fetch_add(1);
            if (r >= r_count) break;
            sample_into(spec, buffer, make_stream(master_seed, sweep_point, r));
            rep_sd[r] = sample_sd(buffer);
            std::sort(buffer.begin(), buffer.end());
            quantiles_sorted(buffer, grid, {quantile_matrix.data() + r * g_count, g_count});
        }
    };

    if (nworkers <= 1) {
        run_worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nworkers));
        for (int w = 0; w < nworkers; ++w) pool.emplace_back(run_worker);
        for (auto& t : pool) t.join();
    }

    double s_bar = 0.0;
    for (double s : rep_sd) s_bar += s;
    s_bar /= static_cast<double>(r_count);

    std::vector<StdErrRow> rows;
    rows.reserve(g_count);
    for (std::size_t j = 0; j < g_count; ++j) {
        // Welford over replicates, fixed order
        double mean = 0.0;
        double m2 = 0.0;
        for (std::size_t r = 0; r < r_count; ++r) {
            const double x = quantile_matrix[r * g_count + j];
            const double delta = x - mean;
            mean += delta / static_cast<double>(r + 1);
            m2 += delta * (x - mean);
        }
        StdErrRow row;
        row.dist = spec.label();
        row.family = spec.family;
        row.param1 = spec.family == Family::Normal ? spec.mu : spec.shape_k;
        row.param2 = spec.family == Family::Normal ? spec.sigma_param : spec.scale_theta;
        row.n = n;
        row.p = grid[j];
        row.stderr_s = std::sqrt(m2 / static_cast<double>(r_count - 1));
        row.mean_estimate = mean;
        row.s_bar = s_bar;
        rows.push_back(std::move(row));
    }
    return rows;
}

StdErrTable sweep(const MCConfig& config) {
    config.validate();
    StdErrTable table;
    table.rows.reserve(config.n_grid.size() * config.grid.size());
    for (std::size_t j = 0; j < config.n_grid.size(); ++j) {
        auto slice = stderr_for_size(config.spec, config.n_grid[j], config.grid,
                                     config.replicates, config.master_seed, j,
                                     config.workers);
        for (auto& row : slice) table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace qse
