#ifndef QSE_DISTRIBUTIONS_HPP
#define QSE_DISTRIBUTIONS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qse/rng.hpp"

namespace qse {

enum class Family { Normal, Gamma };

// Population being sampled: Normal(mu, sigma) or Gamma(shape k, scale theta).
struct DistributionSpec {
    Family family = Family::Normal;
    double mu = 0.0;          // Normal only
    double sigma_param = 1.0; // Normal only
    double shape_k = 1.0;     // Gamma only
    double scale_theta = 1.0; // Gamma only

    static DistributionSpec normal(double mu, double sigma);
    static DistributionSpec gamma(double k, double theta);

    // "normal(0,1)" has no CSV-hostile characters: label uses '-' separators.
    std::string label() const;
    // throws std::invalid_argument on non-positive scale/shape
    void validate() const;
};

// sigma for Normal, theta*sqrt(k) for Gamma
double theoretical_sigma(const DistributionSpec& spec);

// Population mean: mu for Normal, k*theta for Gamma.
double theoretical_mean(const DistributionSpec& spec);

// Fills out with n i.i.d. draws. Deterministic given (spec, n, stream);
// the stream is consumed by value so repeated calls with the same stream
// reproduce the same sequence bit for bit.
void sample_into(const DistributionSpec& spec, std::span<double> out, RngStream stream);

std::vector<double> sample(const DistributionSpec& spec, std::size_t n, RngStream stream);

namespace detail {
// Exact Box-Muller; full tail support.
double draw_normal(CounterRng& rng);
// Marsaglia-Tsang squeeze for k >= 1; k < 1 boosted via
// Gamma(k) = Gamma(k+1) * U^(1/k). Unit scale.
double draw_gamma_shape(CounterRng& rng, double k);
} // namespace detail

} // namespace qse

#endif
