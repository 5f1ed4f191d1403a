#include "qse/distributions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qse {

DistributionSpec DistributionSpec::normal(double mu, double sigma) {
    DistributionSpec s;
    s.family = Family::Normal;
    s.mu = mu;
    s.sigma_param = sigma;
    s.validate();
    return s;
}

DistributionSpec DistributionSpec::gamma(double k, double theta) {
    DistributionSpec s;
    s.family = Family::Gamma;
    s.shape_k = k;
    s.scale_theta = theta;
    s.validate();
    return s;
}

void DistributionSpec::validate() const {
    if (family == Family::Normal) {
        if (!(sigma_param > 0.0) || !std::isfinite(sigma_param) || !std::isfinite(mu))
            throw std::invalid_argument("normal spec requires finite mu and sigma > 0");
    } else {
        if (!(shape_k > 0.0) || !(scale_theta > 0.0) ||
            !std::isfinite(shape_k) || !std::isfinite(scale_theta))
            throw std::invalid_argument("gamma spec requires shape k > 0 and scale theta > 0");
    }
}

namespace {
std::string fmt_param(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}
} // namespace

std::string DistributionSpec::label() const {
    if (family == Family::Normal)
        return "normal-" + fmt_param(mu) + "-" + fmt_param(sigma_param);
    return "gamma-" + fmt_param(shape_k) + "-" + fmt_param(scale_theta);
}

double theoretical_sigma(const DistributionSpec& spec) {
    spec.validate();
    if (spec.family == Family::Normal) return spec.sigma_param;
    return spec.scale_theta * std::sqrt(spec.shape_k);
}

double theoretical_mean(const DistributionSpec& spec) {
    spec.validate();
    if (spec.family == Family::Normal) return spec.mu;
    return spec.shape_k * spec.scale_theta;
}

namespace detail {

double draw_normal(CounterRng& rng) {
    // Box-Muller, cosine branch. u1 in (0,1] keeps the log finite.
    double u1 = rng.next_unit_positive();
    double u2 = rng.next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * M_PI * u2);
}

double draw_gamma_shape(CounterRng& rng, double k) {
    double boost = 1.0;
    if (k < 1.0) {
        // Gamma(k) = Gamma(k+1) * U^(1/k)
        boost = std::pow(rng.next_unit_positive(), 1.0 / k);
        k += 1.0;
    }
    const double d = k - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = draw_normal(rng);
        double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        double v = t * t * t;
        double u = rng.next_unit_positive();
        double x2 = x * x;
        // squeeze, then the exact acceptance test
        if (u < 1.0 - 0.0331 * x2 * x2) return boost * d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return boost * d * v;
    }
}

} // namespace detail

void sample_into(const DistributionSpec& spec, std::span<double> out, RngStream stream) {
    spec.validate();
    CounterRng rng(stream);
    if (spec.family == Family::Normal) {
        const double mu = spec.mu;
        const double sd = spec.sigma_param;
        std::size_t i = 0;
        // consume uniforms in pairs; both Box-Muller branches are used
        for (; i + 1 < out.size(); i += 2) {
            double u1 = rng.next_unit_positive();
            double u2 = rng.next_unit();
            double r = std::sqrt(-2.0 * std::log(u1));
            double a = 2.0 * M_PI * u2;
            out[i] = mu + sd * (r * std::cos(a));
            out[i + 1] = mu + sd * (r * std::sin(a));
        }
        if (i < out.size()) out[i] = mu + sd * detail::draw_normal(rng);
    } else {
        for (double& x : out)
            x = spec.scale_theta * detail::draw_gamma_shape(rng, spec.shape_k);
    }
}

std::vector<double> sample(const DistributionSpec& spec, std::size_t n, RngStream stream) {
    if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
    std::vector<double> out(n);
    sample_into(spec, out, stream);
    return out;
}

} // namespace qse
