#include <doctest.h>

#include <cmath>

#include "qse/csv.hpp"
#include "qse/mc_engine.hpp"

using namespace qse;

TEST_CASE("default n grids") {
    const auto full = default_n_grid(NGridMode::PaperFull);
    CHECK(full.size() == 7991);
    CHECK(full.front() == 10);
    CHECK(full.back() == 8000);

    const auto desk = default_n_grid(NGridMode::Desk);
    CHECK(desk.size() == 24);
    CHECK(std::find(desk.begin(), desk.end(), 3000) != desk.end());
    CHECK(desk.back() == 8000);
    for (std::size_t i = 1; i < desk.size(); ++i) CHECK(desk[i] > desk[i - 1]);
}

TEST_CASE("config validation") {
    MCConfig cfg;
    cfg.spec = DistributionSpec::normal(0.0, 1.0);
    cfg.n_grid = {100};
    cfg.replicates = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.replicates = 100;
    cfg.n_grid = {5};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.n_grid = {100, 100};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.n_grid = {100};
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("single-cell sweep cardinality") {
    MCConfig cfg;
    cfg.spec = DistributionSpec::normal(0.0, 1.0);
    cfg.replicates = 50;
    cfg.n_grid = {100};
    cfg.grid = QuantileGrid({0.5});
    cfg.master_seed = 3;
    const auto table = sweep(cfg);
    CHECK(table.rows.size() == 1);
    CHECK(table.rows[0].n == 100);
    CHECK(table.rows[0].p == 0.5);
    CHECK(table.rows[0].stderr_s > 0.0);
}

TEST_CASE("sweep is deterministic across runs and worker counts") {
    MCConfig cfg;
    cfg.spec = DistributionSpec::gamma(1.0, 1.0);
    cfg.replicates = 400;
    cfg.n_grid = {10, 40, 160};
    cfg.master_seed = 9;
    cfg.workers = 1;
    const auto csv1 = table_to_csv(sweep(cfg));
    const auto csv1b = table_to_csv(sweep(cfg));
    CHECK(csv1 == csv1b);
    cfg.workers = 3;
    const auto csv3 = table_to_csv(sweep(cfg));
    CHECK(csv1 == csv3);
}

TEST_CASE("stderr scales like N^(-1/2) at the median") {
    MCConfig cfg;
    cfg.spec = DistributionSpec::normal(0.0, 1.0);
    cfg.replicates = 6000;
    cfg.n_grid = {1000, 4000};
    cfg.grid = QuantileGrid({0.5});
    cfg.master_seed = 17;
    const auto table = sweep(cfg);
    REQUIRE(table.rows.size() == 2);
    const double ratio = table.rows[0].stderr_s / table.rows[1].stderr_s;
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("median factor and mean recovery at moderate scale") {
    const auto rows = stderr_for_size(DistributionSpec::normal(0.0, 1.0), 500,
                                      QuantileGrid({0.5}), 4000, 21, 0);
    REQUIRE(rows.size() == 1);
    // sqrt(N) * stderr ~ 1.253 with a few percent of Monte Carlo noise
    CHECK(rows[0].stderr_s * std::sqrt(500.0) == doctest::Approx(1.253).epsilon(0.06));
    // mean of the median estimates recovers 0
    CHECK(std::abs(rows[0].mean_estimate) < 4.0 * rows[0].stderr_s / std::sqrt(4000.0));
    // S_bar near the population sigma
    CHECK(rows[0].s_bar == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("quantile stderr dominates the mean's stderr for large N") {
    const auto grid = paper_grid();
    const auto rows = stderr_for_size(DistributionSpec::normal(0.0, 1.0), 640, grid, 1500,
                                      23, 0);
    for (const auto& row : rows)
        CHECK(row.stderr_s >= 0.95 * row.s_bar / std::sqrt(640.0));
}

TEST_CASE("error propagation") {
    CHECK_THROWS_AS(stderr_for_size(DistributionSpec::normal(0.0, 1.0), 5,
                                    QuantileGrid({0.5}), 100, 1, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(stderr_for_size(DistributionSpec::normal(0.0, 1.0), 100,
                                    QuantileGrid({0.5}), 1, 1, 0),
                    std::invalid_argument);
}
