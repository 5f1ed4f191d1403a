#include <doctest.h>

#include <cmath>

#include "qse/distributions.hpp"

using namespace qse;

namespace {

struct Moments {
    double mean;
    double var;
};

Moments moments(const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return {mean, ss / static_cast<double>(x.size() - 1)};
}

} // namespace

TEST_CASE("theoretical sigma") {
    CHECK(theoretical_sigma(DistributionSpec::normal(0.0, 1.0)) == 1.0);
    CHECK(theoretical_sigma(DistributionSpec::gamma(1.0, 1.0)) == 1.0);
    CHECK(theoretical_sigma(DistributionSpec::gamma(0.7, 10.0)) ==
          doctest::Approx(8.36660026534076).epsilon(1e-12));
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(DistributionSpec::normal(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::normal(0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::gamma(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::gamma(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("sampling is deterministic") {
    const auto spec = DistributionSpec::gamma(0.9, 2.0);
    const auto a = sample(spec, 1000, make_stream(5, 1, 2));
    const auto b = sample(spec, 1000, make_stream(5, 1, 2));
    CHECK(a == b);
    const auto c = sample(spec, 1000, make_stream(5, 1, 3));
    CHECK(a != c);
}

TEST_CASE("normal(0,1) moments at n = 1e6") {
    const auto x = sample(DistributionSpec::normal(0.0, 1.0), 1000000, make_stream(11, 0, 0));
    const auto m = moments(x);
    CHECK(std::abs(m.mean) < 0.005);
    CHECK(m.var > 0.99);
    CHECK(m.var < 1.01);
}

TEST_CASE("gamma(1,1) moments and positivity at n = 1e6") {
    const auto x = sample(DistributionSpec::gamma(1.0, 1.0), 1000000, make_stream(12, 0, 0));
    for (double v : x) REQUIRE(v > 0.0);
    const auto m = moments(x);
    CHECK(std::abs(m.mean - 1.0) < 0.01);
}

TEST_CASE("gamma(1.3,5) matches closed-form mean and sd") {
    const auto x = sample(DistributionSpec::gamma(1.3, 5.0), 1000000, make_stream(13, 0, 0));
    const auto m = moments(x);
    CHECK(std::abs(m.mean - 6.5) < 0.1);
    CHECK(std::abs(std::sqrt(m.var) - 5.0 * std::sqrt(1.3)) < 0.1);
}

TEST_CASE("moment consistency within 5 standard errors across the parameter range") {
    // se(mean) = sigma/sqrt(n); se(var) ~ sigma^2 * sqrt((kurt-1)/n)
    const std::size_t n = 200000;
    int stream = 0;
    for (const auto& spec :
         {DistributionSpec::normal(-2.0, 3.0), DistributionSpec::gamma(0.7, 1.0),
          DistributionSpec::gamma(1.3, 15.0)}) {
        const auto x = sample(spec, n, make_stream(14, 0, static_cast<std::uint64_t>(stream++)));
        const auto m = moments(x);
        const double sigma = theoretical_sigma(spec);
        CHECK(std::abs(m.mean - theoretical_mean(spec)) < 5.0 * sigma / std::sqrt(double(n)));
        // generous excess-kurtosis allowance for the skewed gamma cases
        const double se_var = sigma * sigma * std::sqrt(30.0 / double(n));
        CHECK(std::abs(m.var - sigma * sigma) < 5.0 * se_var);
    }
}

TEST_CASE("boosted gamma path (k < 1) stays strictly positive") {
    const auto x = sample(DistributionSpec::gamma(0.7, 1.0), 100000, make_stream(15, 0, 0));
    for (double v : x) REQUIRE(v > 0.0);
}
