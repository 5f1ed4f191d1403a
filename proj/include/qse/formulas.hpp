#ifndef QSE_FORMULAS_HPP
#define QSE_FORMULAS_HPP

#include <array>
#include <utility>
#include <vector>

namespace qse {

// Standard error of the sample mean: sigma / sqrt(N).
double stderr_mean(double sigma, long n);

// Scaling coefficient for normal populations,
//   K(p) = 0.881 * [ (0.5/p)^0.351 + (0.5/(1-p))^0.351 - 2 ] + 1.253,
// valid for 0.001 <= p <= 0.999. Symmetric in p <-> 1-p, minimum 1.253 at
// the median.
double k_normal(double p);

// Scaling coefficient for gamma populations,
//   K(p) = 1.09 * (p / (1-p))^0.47,
// valid for 0.001 <= p <= 0.999. Strictly increasing.
double k_gamma(double p);

// Expected sampling error of a quantile estimate: K * S / sqrt(N).
double stderr_quantile(double k, double s, long n);

enum class KForm { NormalForm, GammaForm };

// Residual space for fit_k_form. Linear minimizes sum (K_model - K_meas)^2;
// Log minimizes sum (log K_model - log K_meas)^2, i.e. relative errors.
// Log is the right choice for measured points whose noise is proportional
// to K (as Monte Carlo stderr estimates are): in linear space the largest
// K values dominate the objective and inflate the coefficient variance.
enum class FitSpace { Linear, Log };

struct FitCoefficients;

namespace detail {
// dK/d(a,b,c) of the chosen form at level p (c entry is 0 for GammaForm)
std::array<double, 3> k_form_jacobian(const FitCoefficients& cf, double p);
} // namespace detail

// Coefficients of the empirical K(p) shapes.
// NormalForm: K(p) = a*[(0.5/p)^b + (0.5/(1-p))^b - 2] + c
// GammaForm:  K(p) = a*(p/(1-p))^b
struct FitCoefficients {
    KForm form = KForm::NormalForm;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0; // NormalForm only

    double evaluate(double p) const;
};

struct FitResult {
    FitCoefficients coeffs;
    bool converged = false;
    double objective = 0.0; // sum of squared residuals at the solution
    int iterations = 0;
};

// Damped Gauss-Newton least squares of the chosen K(p) form against measured
// (p, K) points. Residuals live in `space` (unweighted in K by default).
// Starts from `init` when given, otherwise from (1, 0.35, 1.25) / (1, 0.5);
// falls back to a coarse grid search for the seed if the default start
// cannot decrease the objective. Log space requires all K_measured > 0.
FitResult fit_k_form(const std::vector<std::pair<double, double>>& points, KForm form,
                     FitSpace space = FitSpace::Linear);
FitResult fit_k_form(const std::vector<std::pair<double, double>>& points, KForm form,
                     const FitCoefficients& init, FitSpace space = FitSpace::Linear);

} // namespace qse

#endif
