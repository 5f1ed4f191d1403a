#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qse/distributions.hpp"
#include "qse/quantile.hpp"

using namespace qse;

TEST_CASE("paper grid shape") {
    const auto grid = paper_grid();
    CHECK(grid.size() == 45);
    const auto& levels = grid.levels();
    CHECK(std::find(levels.begin(), levels.end(), 0.001) != levels.end());
    CHECK(std::find(levels.begin(), levels.end(), 0.5) != levels.end());
    CHECK(std::find(levels.begin(), levels.end(), 0.999) != levels.end());
    CHECK(std::is_sorted(levels.begin(), levels.end()));
    CHECK(std::adjacent_find(levels.begin(), levels.end()) == levels.end());
    // symmetric about the median
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(grid[i] + grid[grid.size() - 1 - i] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("grid invariants are enforced") {
    CHECK_THROWS_AS(QuantileGrid({}), std::invalid_argument);
    CHECK_THROWS_AS(QuantileGrid({0.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(QuantileGrid({0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(QuantileGrid({0.9, 0.1}), std::invalid_argument);
}

TEST_CASE("midpoint rule on hand-worked cases") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    // p_k = {0.125, 0.375, 0.625, 0.875}
    CHECK(quantile_sorted(x, 0.5) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(quantile_sorted(x, 0.001) == 1.0);
    CHECK(quantile_sorted(x, 0.875) == 4.0);
    CHECK(quantile_sorted(x, 0.999) == 4.0);
    // 0.25 sits halfway between p_1 and p_2
    CHECK(quantile_sorted(x, 0.25) == doctest::Approx(1.5).epsilon(1e-15));

    const std::vector<double> single{10.0};
    for (double p : {0.001, 0.3, 0.5, 0.99}) CHECK(quantile_sorted(single, p) == 10.0);
}

TEST_CASE("empty sample is an error") {
    const QuantileGrid grid({0.5});
    CHECK_THROWS_AS(estimate_quantiles({}, grid), std::invalid_argument);
}

TEST_CASE("properties: monotonicity, equivariance, permutation invariance, range") {
    const auto grid = paper_grid();
    CounterRng rng(make_stream(31, 0, 0));
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.next_unit() * 200);
        std::vector<double> x(n);
        for (auto& v : x) v = 10.0 * (rng.next_unit() - 0.5);

        const auto q = estimate_quantiles(x, grid);
        CHECK(std::is_sorted(q.begin(), q.end()));
        const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
        for (double v : q) {
            CHECK(v >= *lo);
            CHECK(v <= *hi);
        }

        // affine equivariance, a > 0
        const double a = 0.5 + 3.0 * rng.next_unit();
        const double b = 10.0 * (rng.next_unit() - 0.5);
        auto scaled = x;
        for (auto& v : scaled) v = a * v + b;
        const auto qs = estimate_quantiles(scaled, grid);
        for (std::size_t i = 0; i < q.size(); ++i)
            CHECK(qs[i] == doctest::Approx(a * q[i] + b).epsilon(1e-12));

        // permutation invariance
        auto shuffled = x;
        for (std::size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1],
                      shuffled[static_cast<std::size_t>(rng.next_unit() * double(i))]);
        CHECK(estimate_quantiles(shuffled, grid) == q);
    }
}

TEST_CASE("consistency against normal(0,1) quantiles") {
    const auto spec = DistributionSpec::normal(0.0, 1.0);
    const QuantileGrid grid({0.5, 0.975});
    double sum_med = 0.0, sum_975 = 0.0;
    const int reps = 100;
    for (int r = 0; r < reps; ++r) {
        const auto x = sample(spec, 100000, make_stream(32, 0, static_cast<std::uint64_t>(r)));
        const auto q = estimate_quantiles(x, grid);
        sum_med += q[0];
        sum_975 += q[1];
    }
    CHECK(std::abs(sum_med / reps) < 0.02);
    CHECK(std::abs(sum_975 / reps - 1.96) < 0.03);
}
