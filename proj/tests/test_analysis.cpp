#include <doctest.h>

#include <cmath>

#include "qse/analysis.hpp"
#include "qse/formulas.hpp"

using namespace qse;

namespace {

// synthetic table: stderr = coeff * N^exponent, flattened to the value at
// n_flat for all N below it (n_flat = 0 disables the flattening)
StdErrTable synthetic_table(const DistributionSpec& spec, const std::vector<long>& n_grid,
                            double coeff, double exponent, long n_flat = 0) {
    StdErrTable table;
    for (long n : n_grid) {
        StdErrRow row;
        row.dist = spec.label();
        row.family = spec.family;
        row.n = n;
        row.p = 0.5;
        const long eff = n_flat > 0 ? std::max(n, n_flat) : n;
        row.stderr_s = coeff * std::pow(static_cast<double>(eff), exponent);
        table.rows.push_back(row);
    }
    return table;
}

const std::vector<long> kGrid = {10,  14,  20,  28,   40,   55,   80,   110,
                                 160, 220, 320, 450,  640,  900,  1300, 1800,
                                 2500, 3000, 3600, 4300, 5200, 6200, 7400, 8000};

} // namespace

TEST_CASE("loglog_fit is exact on a pure power law") {
    const auto spec = DistributionSpec::normal(0.0, 1.0);
    const auto table = synthetic_table(spec, kGrid, 2.0, -0.5);
    const auto fit = loglog_fit(table, spec.label(), 0.5, 10);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit.intercept_log10 == doctest::Approx(std::log10(2.0)).epsilon(1e-12));
    CHECK(fit.n_used == static_cast<long>(kGrid.size()));
}

TEST_CASE("loglog_fit honors the N floor and the minimum point count") {
    const auto spec = DistributionSpec::normal(0.0, 1.0);
    const auto table = synthetic_table(spec, kGrid, 2.0, -0.5);
    CHECK(loglog_fit(table, spec.label(), 0.5, 3000).n_used == 7);
    CHECK_THROWS_AS(loglog_fit(table, spec.label(), 0.5, 7000), std::invalid_argument);
    CHECK_THROWS_AS(loglog_fit(table, "no-such-dist", 0.5, 10), std::invalid_argument);
}

TEST_CASE("breakpoint detection on an exact power law is unconstrained") {
    const auto spec = DistributionSpec::normal(0.0, 1.0);
    const auto table = synthetic_table(spec, kGrid, 2.0, -0.5);
    const auto [n_min, unconstrained] = detect_min_sample_size(table, spec.label(), 0.5);
    REQUIRE(n_min.has_value());
    CHECK(*n_min == 10);
    CHECK(unconstrained);
}

TEST_CASE("breakpoint detection finds a synthetic knee") {
    const auto spec = DistributionSpec::normal(0.0, 1.0);
    // flat below N = 450, power law above: first all-good window starts there
    const auto table = synthetic_table(spec, kGrid, 2.0, -0.5, 450);
    const auto [n_min, unconstrained] = detect_min_sample_size(table, spec.label(), 0.5);
    REQUIRE(n_min.has_value());
    CHECK_FALSE(unconstrained);
    CHECK(*n_min == 450);
}

TEST_CASE("breakpoint detection reports none on a slope that never settles") {
    const auto spec = DistributionSpec::normal(0.0, 1.0);
    const auto table = synthetic_table(spec, kGrid, 2.0, -0.9);
    const auto [n_min, unconstrained] = detect_min_sample_size(table, spec.label(), 0.5);
    CHECK_FALSE(n_min.has_value());
    CHECK_FALSE(unconstrained);
}

TEST_CASE("breakpoint detection needs span") {
    const auto spec = DistributionSpec::normal(0.0, 1.0);
    const auto table = synthetic_table(spec, {10, 20, 30, 40, 50, 60, 70, 80}, 2.0, -0.5);
    CHECK_THROWS_AS(detect_min_sample_size(table, spec.label(), 0.5),
                    std::invalid_argument);
}

TEST_CASE("extract_k keeps the K / intercept identity") {
    const auto spec = DistributionSpec::gamma(0.7, 10.0); // sigma != 1
    const auto table = synthetic_table(spec, kGrid, 3.5, -0.5);
    const auto res = extract_k(table, spec, 0.5);
    CHECK(res.k * theoretical_sigma(spec) ==
          doctest::Approx(std::pow(10.0, res.intercept_log10)).epsilon(1e-12));
    CHECK(res.k == doctest::Approx(3.5 / theoretical_sigma(spec)).epsilon(1e-10));
    CHECK(res.slope == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("bootstrap: degenerate and invalid inputs") {
    const std::vector<double> constant(50, 5.0);
    CHECK(bootstrap_stderr(constant, 0.5, 500, make_stream(1, 0, 0)) == 0.0);
    const std::vector<double> tiny{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(bootstrap_stderr(tiny, 0.5, 500, make_stream(1, 0, 0)),
                    std::invalid_argument);
    const std::vector<double> ok(50, 1.0);
    CHECK_THROWS_AS(bootstrap_stderr(ok, 0.5, 100, make_stream(1, 0, 0)),
                    std::invalid_argument);
}

TEST_CASE("bootstrap is scale-equivariant under the same stream") {
    std::vector<double> x;
    CounterRng rng(make_stream(51, 0, 0));
    for (int i = 0; i < 200; ++i) x.push_back(rng.next_unit() * 7.0 - 2.0);
    const double base = bootstrap_stderr(x, 0.9, 400, make_stream(51, 1, 0));
    auto scaled = x;
    for (auto& v : scaled) v *= 3.0;
    const double tripled = bootstrap_stderr(scaled, 0.9, 400, make_stream(51, 1, 0));
    CHECK(tripled == doctest::Approx(3.0 * base).epsilon(1e-12));
}

TEST_CASE("bootstrap agrees with the closed-form prediction") {
    const auto spec = DistributionSpec::normal(0.0, 1.0);
    const double k = k_normal(0.9);
    double ratio_sum = 0.0;
    const int reps = 20;
    for (int i = 0; i < reps; ++i) {
        const auto x = sample(spec, 2000, make_stream(52, 0, static_cast<std::uint64_t>(i)));
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= static_cast<double>(x.size());
        double ss = 0.0;
        for (double v : x) ss += (v - mean) * (v - mean);
        const double s = std::sqrt(ss / static_cast<double>(x.size() - 1));
        const double boot =
            bootstrap_stderr(x, 0.9, 2000, make_stream(52, 1, static_cast<std::uint64_t>(i)));
        ratio_sum += boot / stderr_quantile(k, s, 2000);
    }
    CHECK(std::abs(ratio_sum / reps - 1.0) < 0.2);
}
