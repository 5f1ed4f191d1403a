#include "qse/formulas.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qse {

namespace {

constexpr double kValidLo = 0.001;
constexpr double kValidHi = 0.999;

void check_range(double p) {
    // small slack so levels like 0.999 survive decimal parsing
    if (!(p >= kValidLo - 1e-12 && p <= kValidHi + 1e-12))
        throw std::domain_error("quantile level outside the validity range [0.001, 0.999]");
}

constexpr double kNormA = 0.881;
constexpr double kNormB = 0.351;
constexpr double kNormC = 1.253;
constexpr double kGamA = 1.09;
constexpr double kGamB = 0.47;

} // namespace

double stderr_mean(double sigma, long n) {
    if (!(sigma > 0.0)) throw std::domain_error("stderr_mean: sigma must be > 0");
    if (n < 1) throw std::domain_error("stderr_mean: N must be >= 1");
    return sigma / std::sqrt(static_cast<double>(n));
}

double k_normal(double p) {
    check_range(p);
    return kNormA * (std::pow(0.5 / p, kNormB) + std::pow(0.5 / (1.0 - p), kNormB) - 2.0) +
           kNormC;
}

double k_gamma(double p) {
    check_range(p);
    return kGamA * std::pow(p / (1.0 - p), kGamB);
}

double stderr_quantile(double k, double s, long n) {
    if (k < 0.0) throw std::domain_error("stderr_quantile: K must be >= 0");
    if (!(s > 0.0)) throw std::domain_error("stderr_quantile: S must be > 0");
    if (n < 1) throw std::domain_error("stderr_quantile: N must be >= 1");
    return k * s / std::sqrt(static_cast<double>(n));
}

double FitCoefficients::evaluate(double p) const {
    if (form == KForm::NormalForm)
        return a * (std::pow(0.5 / p, b) + std::pow(0.5 / (1.0 - p), b) - 2.0) + c;
    return a * std::pow(p / (1.0 - p), b);
}

namespace detail {

std::array<double, 3> k_form_jacobian(const FitCoefficients& cf, double p) {
    if (cf.form == KForm::NormalForm) {
        const double t1 = 0.5 / p;
        const double t2 = 0.5 / (1.0 - p);
        const double g1 = std::pow(t1, cf.b);
        const double g2 = std::pow(t2, cf.b);
        return {g1 + g2 - 2.0, cf.a * (g1 * std::log(t1) + g2 * std::log(t2)), 1.0};
    }
    const double r = p / (1.0 - p);
    const double rb = std::pow(r, cf.b);
    return {rb, cf.a * rb * std::log(r), 0.0};
}

} // namespace detail

namespace {

int n_params(KForm form) { return form == KForm::NormalForm ? 3 : 2; }

void residuals_and_jacobian(const std::vector<std::pair<double, double>>& points,
                            const FitCoefficients& cf, FitSpace space,
                            std::vector<double>& res,
                            std::vector<std::array<double, 3>>& jac) {
    const std::size_t m = points.size();
    res.resize(m);
    jac.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double model = cf.evaluate(points[i].first);
        jac[i] = detail::k_form_jacobian(cf, points[i].first);
        if (space == FitSpace::Linear) {
            res[i] = model - points[i].second;
        } else {
            // d/dtheta log(model) = (dmodel/dtheta) / model
            res[i] = std::log(model) - std::log(points[i].second);
            for (auto& j : jac[i]) j /= model;
        }
    }
}

double objective_of(const std::vector<std::pair<double, double>>& points,
                    const FitCoefficients& cf, FitSpace space) {
    double s = 0.0;
    for (const auto& [p, k] : points) {
        const double model = cf.evaluate(p);
        if (space == FitSpace::Log && !(model > 0.0))
            return std::numeric_limits<double>::infinity();
        const double r =
            space == FitSpace::Linear ? model - k : std::log(model) - std::log(k);
        s += r * r;
    }
    return s;
}

// Solve the np x np normal equations by Gaussian elimination with partial
// pivoting. Throws on a (numerically) singular system.
std::array<double, 3> solve_normal_equations(std::array<std::array<double, 3>, 3> ata,
                                             std::array<double, 3> atb, int np) {
    for (int col = 0; col < np; ++col) {
        int piv = col;
        for (int r = col + 1; r < np; ++r)
            if (std::abs(ata[r][col]) > std::abs(ata[piv][col])) piv = r;
        if (std::abs(ata[piv][col]) < 1e-300)
            throw std::runtime_error("fit_k_form: singular Jacobian (degenerate points)");
        std::swap(ata[col], ata[piv]);
        std::swap(atb[col], atb[piv]);
        for (int r = col + 1; r < np; ++r) {
            const double f = ata[r][col] / ata[col][col];
            for (int c = col; c < np; ++c) ata[r][c] -= f * ata[col][c];
            atb[r] -= f * atb[col];
        }
    }
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int r = np - 1; r >= 0; --r) {
        double s = atb[r];
        for (int c = r + 1; c < np; ++c) s -= ata[r][c] * x[c];
        x[r] = s / ata[r][r];
    }
    return x;
}

FitCoefficients apply_step(const FitCoefficients& cf, const std::array<double, 3>& step,
                           double scale) {
    FitCoefficients out = cf;
    out.a -= scale * step[0];
    out.b -= scale * step[1];
    if (cf.form == KForm::NormalForm) out.c -= scale * step[2];
    return out;
}

FitCoefficients grid_search_seed(const std::vector<std::pair<double, double>>& points,
                                 KForm form, FitSpace space) {
    const std::array<double, 5> as{0.2, 0.5, 1.0, 2.0, 5.0};
    const std::array<double, 5> bs{0.1, 0.25, 0.4, 0.6, 0.9};
    const std::array<double, 5> cs{0.0, 0.5, 1.0, 1.5, 2.5};
    FitCoefficients best{form, 1.0, 0.5, 1.0};
    double best_obj = std::numeric_limits<double>::infinity();
    for (double a : as)
        for (double b : bs) {
            if (form == KForm::GammaForm) {
                FitCoefficients cand{form, a, b, 0.0};
                double obj = objective_of(points, cand, space);
                if (obj < best_obj) { best_obj = obj; best = cand; }
            } else {
                for (double c : cs) {
                    FitCoefficients cand{form, a, b, c};
                    double obj = objective_of(points, cand, space);
                    if (obj < best_obj) { best_obj = obj; best = cand; }
                }
            }
        }
    return best;
}

FitResult gauss_newton(const std::vector<std::pair<double, double>>& points,
                       FitCoefficients cf, FitSpace space) {
    constexpr int max_iter = 200;
    constexpr double rel_tol = 1e-10;
    const int np = n_params(cf.form);

    std::vector<double> res;
    std::vector<std::array<double, 3>> jac;
    double obj = objective_of(points, cf, space);

    FitResult result;
    for (int iter = 0; iter < max_iter; ++iter) {
        result.iterations = iter + 1;
        residuals_and_jacobian(points, cf, space, res, jac);

        std::array<std::array<double, 3>, 3> ata{};
        std::array<double, 3> atb{};
        for (std::size_t i = 0; i < res.size(); ++i)
            for (int r = 0; r < np; ++r) {
                atb[r] += jac[i][r] * res[i];
                for (int c = 0; c < np; ++c) ata[r][c] += jac[i][r] * jac[i][c];
            }
        const auto step = solve_normal_equations(ata, atb, np);

        // backtracking: halve the Gauss-Newton step until the objective drops
        double scale = 1.0;
        FitCoefficients next = cf;
        double next_obj = obj;
        bool improved = false;
        for (int half = 0; half < 40; ++half) {
            FitCoefficients cand = apply_step(cf, step, scale);
            const double cand_obj = objective_of(points, cand, space);
            if (std::isfinite(cand_obj) && cand_obj < obj) {
                next = cand;
                next_obj = cand_obj;
                improved = true;
                break;
            }
            scale *= 0.5;
        }
        if (!improved) {
            // no step direction decreases the objective any further
            result.converged = true;
            break;
        }

        const double rel_dec = (obj - next_obj) / std::max(obj, 1e-300);
        cf = next;
        obj = next_obj;
        if (rel_dec < rel_tol) {
            result.converged = true;
            break;
        }
    }
    result.coeffs = cf;
    result.objective = obj;
    return result;
}

} // namespace

FitResult fit_k_form(const std::vector<std::pair<double, double>>& points, KForm form,
                     const FitCoefficients& init, FitSpace space) {
    const std::size_t min_pts = form == KForm::NormalForm ? 4 : 3;
    if (points.size() < min_pts)
        throw std::invalid_argument("fit_k_form: not enough points for this form");
    for (const auto& [p, k] : points) {
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("fit_k_form: level outside (0,1)");
        if (space == FitSpace::Log && !(k > 0.0))
            throw std::invalid_argument("fit_k_form: log space needs K_measured > 0");
    }
    FitCoefficients start = init;
    start.form = form;
    FitResult r = gauss_newton(points, start, space);
    if (!r.converged || r.iterations <= 1) {
        // default start went nowhere; reseed from a coarse grid search
        FitResult r2 = gauss_newton(points, grid_search_seed(points, form, space), space);
        if (r2.objective < r.objective || (r2.converged && !r.converged)) return r2;
    }
    return r;
}

FitResult fit_k_form(const std::vector<std::pair<double, double>>& points, KForm form,
                     FitSpace space) {
    FitCoefficients init;
    init.form = form;
    if (form == KForm::NormalForm) {
        init.a = 1.0;
        init.b = 0.35;
        init.c = 1.25;
    } else {
        init.a = 1.0;
        init.b = 0.5;
    }
    return fit_k_form(points, form, init, space);
}

} // namespace qse
