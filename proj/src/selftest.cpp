#include "qse/selftest.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <vector>

#include "qse/analysis.hpp"
#include "qse/csv.hpp"
#include "qse/formulas.hpp"
#include "qse/mc_engine.hpp"
#include "qse/reference.hpp"

namespace qse {

namespace {

struct Reporter {
    std::ostream& out;
    int failures = 0;

    void report(int criterion, const std::string& name, bool pass,
                const std::string& detail) {
        out << (pass ? "PASS" : "FAIL") << " [" << criterion << "] " << name << ": "
            << detail << "\n";
        out.flush();
        if (!pass) ++failures;
    }
};

std::string pct(double x) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << 100.0 * x << "%";
    return os.str();
}

std::string fixed(double x, int prec = 4) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(prec) << x;
    return os.str();
}

double round_to(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

double sample_sd(const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

} // namespace

int run_acceptance(const SelfTestOptions& options, std::ostream& out) {
    using clock = std::chrono::steady_clock;
    Reporter rep{out};

    const auto normal_spec = DistributionSpec::normal(0.0, 1.0);
    const auto gamma_spec = DistributionSpec::gamma(1.0, 1.0);
    const QuantileGrid grid = paper_grid();
    // distinct master seeds per population so the two sweeps do not share
    // random streams
    const std::uint64_t normal_seed = options.seed;
    const std::uint64_t gamma_seed = options.seed ^ 0x9e3779b97f4a7c15ULL;

    auto run_sweep = [&](const DistributionSpec& spec, std::uint64_t seed,
                         std::vector<long> n_grid, const char* tag) {
        MCConfig cfg;
        cfg.spec = spec;
        cfg.replicates = options.replicates;
        cfg.n_grid = std::move(n_grid);
        cfg.grid = grid;
        cfg.master_seed = seed;
        cfg.workers = options.workers;
        const auto t0 = clock::now();
        StdErrTable table = sweep(cfg);
        if (options.verbose) {
            const auto secs =
                std::chrono::duration_cast<std::chrono::seconds>(clock::now() - t0).count();
            out << "# " << tag << " sweep " << spec.label() << ": R=" << cfg.replicates
                << ", " << cfg.n_grid.size() << " sample sizes, " << secs << "s\n";
            out.flush();
        }
        return table;
    };

    const StdErrTable normal_table =
        run_sweep(normal_spec, normal_seed, default_n_grid(NGridMode::Desk), "desk");
    const StdErrTable gamma_table =
        run_sweep(gamma_spec, gamma_seed, default_n_grid(NGridMode::Desk), "desk");

    // K extraction extrapolates the free-slope log-log intercept from
    // N in [3000, 8000] down to log10(N) = 0, which magnifies slope noise
    // about twentyfold. The desk grid's 7 points above 3000 leave K with a
    // ~5% standard error at R = 15000, so the K checks run on dense grids
    // over the same fit range. The normal family gets step 10 (501 sizes,
    // K noise ~0.8%): its three-parameter form is sloppy — correlated K
    // noise across levels moves (a, b) several times further than the
    // per-point noise — and needs that precision for the coefficient
    // recovery band. The gamma two-parameter power law is well-conditioned
    // and its acceptance bands are wider, so step 50 (101 sizes, ~1.8%)
    // suffices and saves half an hour of single-core runtime.
    auto make_fit_grid = [](long step) {
        std::vector<long> grid;
        for (long n = 3000; n <= 8000; n += step) grid.push_back(n);
        return grid;
    };
    const StdErrTable normal_fit_table = run_sweep(
        normal_spec, normal_seed ^ 0x517cc1b727220a95ULL, make_fit_grid(10), "fit-grid");
    const StdErrTable gamma_fit_table = run_sweep(
        gamma_spec, gamma_seed ^ 0x517cc1b727220a95ULL, make_fit_grid(50), "fit-grid");

    // --- 1/2: extracted K vs the reference numerical columns ---
    auto check_table1 = [&](int criterion, const DistributionSpec& spec,
                            const StdErrTable& table,
                            const std::array<double, 10>& ref_col, double tol) {
        double worst = 0.0;
        double worst_p = 0.0;
        const double sigma = theoretical_sigma(spec);
        for (std::size_t i = 0; i < reference::table1_levels.size(); ++i) {
            const double p = reference::table1_levels[i];
            const auto fit = loglog_fit(table, spec.label(), p, 3000);
            const double k = std::pow(10.0, fit.intercept_log10) / sigma;
            const double dev = std::abs(k - ref_col[i]) / ref_col[i];
            if (dev > worst) {
                worst = dev;
                worst_p = p;
            }
        }
        rep.report(criterion, spec.family == Family::Normal ? "table1-normal-K"
                                                            : "table1-gamma-K",
                   worst <= tol,
                   "max rel dev " + pct(worst) + " at p=" + format_double(worst_p) +
                       " (limit " + pct(tol) + ")");
    };
    check_table1(1, normal_spec, normal_fit_table, reference::table1_normal_numerical, 0.05);
    check_table1(2, gamma_spec, gamma_fit_table, reference::table1_gamma_numerical, 0.08);

    // --- 3: closed forms reproduce the reference formula columns ---
    {
        bool ok = true;
        std::string mismatch;
        for (std::size_t i = 0; i < reference::table1_levels.size(); ++i) {
            const double p = reference::table1_levels[i];
            if (round_to(k_normal(p), 2) != reference::table1_normal_formula[i]) {
                ok = false;
                mismatch = "k_normal(" + format_double(p) + ")";
                break;
            }
            const int dec = reference::table1_gamma_formula_decimals[i];
            if (round_to(k_gamma(p), dec) != reference::table1_gamma_formula[i]) {
                ok = false;
                mismatch = "k_gamma(" + format_double(p) + ")";
                break;
            }
        }
        rep.report(3, "closed-form-columns", ok,
                   ok ? "all 20 entries match at printed rounding"
                      : mismatch + " off at printed rounding");
    }

    // --- 4: N^(-1/2) law for central normal quantiles ---
    {
        bool ok = true;
        std::string detail;
        for (double p : {0.1, 0.5, 0.9}) {
            const auto fit = loglog_fit(normal_table, normal_spec.label(), p, 3000);
            detail += "slope(p=" + format_double(p) + ")=" + fixed(fit.slope, 3) + " ";
            if (!(fit.slope >= -0.53 && fit.slope <= -0.47)) ok = false;
        }
        rep.report(4, "slope-law-normal", ok, detail + "(limits [-0.53,-0.47])");
    }

    // --- 5: breakpoints for extreme normal quantiles ---
    {
        const auto [n99, u99] = detect_min_sample_size(normal_table, normal_spec.label(), 0.99);
        const auto [n999, u999] =
            detect_min_sample_size(normal_table, normal_spec.label(), 0.999);
        const bool ok99 = n99 && !u99 && *n99 >= 40 && *n99 <= 80;
        const bool ok999 = n999 && !u999 && *n999 >= 400 && *n999 <= 700;
        rep.report(5, "breakpoints-normal", ok99 && ok999,
                   "N*(0.99)=" + (n99 ? std::to_string(*n99) : std::string("none")) +
                       " (limits [40,80]), N*(0.999)=" +
                       (n999 ? std::to_string(*n999) : std::string("none")) +
                       " (limits [400,700])");
    }

    // --- 6: median factor 1.253 at N = 5000 ---
    {
        const QuantileGrid median_grid({0.5});
        // sweep point outside the desk grid's index range
        const auto rows = stderr_for_size(normal_spec, 5000, median_grid, options.replicates,
                                          normal_seed, 1000, options.workers);
        const double factor = rows[0].stderr_s * std::sqrt(5000.0);
        rep.report(6, "median-factor", factor >= 1.23 && factor <= 1.28,
                   "stderr*sqrt(N) = " + fixed(factor) + " (limits [1.23,1.28])");
    }

    // --- 7: coefficient recovery, noiseless and from the measured K points ---
    {
        std::vector<std::pair<double, double>> exact_normal;
        std::vector<std::pair<double, double>> exact_gamma;
        for (double p : grid.levels()) {
            exact_normal.emplace_back(p, k_normal(p));
            exact_gamma.emplace_back(p, k_gamma(p));
        }
        const auto fit_en = fit_k_form(exact_normal, KForm::NormalForm);
        const auto fit_eg = fit_k_form(exact_gamma, KForm::GammaForm);
        const bool noiseless_ok =
            std::abs(fit_en.coeffs.a - 0.881) / 0.881 < 1e-6 &&
            std::abs(fit_en.coeffs.b - 0.351) / 0.351 < 1e-6 &&
            std::abs(fit_en.coeffs.c - 1.253) / 1.253 < 1e-6 &&
            std::abs(fit_eg.coeffs.a - 1.09) / 1.09 < 1e-6 &&
            std::abs(fit_eg.coeffs.b - 0.47) / 0.47 < 1e-6;

        auto measured_points = [&](const StdErrTable& table, const DistributionSpec& spec) {
            std::vector<std::pair<double, double>> pts;
            const double sigma = theoretical_sigma(spec);
            for (double p : grid.levels()) {
                const auto fit = loglog_fit(table, spec.label(), p, 3000);
                pts.emplace_back(p, std::pow(10.0, fit.intercept_log10) / sigma);
            }
            return pts;
        };
        // Log space for the measured points: their noise is proportional to K,
        // and the linear objective would let the largest-K tails dominate.
        const auto fit_mn = fit_k_form(measured_points(normal_fit_table, normal_spec),
                                       KForm::NormalForm, FitSpace::Log);
        const auto fit_mg = fit_k_form(measured_points(gamma_fit_table, gamma_spec),
                                       KForm::GammaForm, FitSpace::Log);
        auto within = [](double v, double ref) { return std::abs(v - ref) / ref <= 0.10; };
        const bool measured_ok = within(fit_mn.coeffs.a, 0.881) &&
                                 within(fit_mn.coeffs.b, 0.351) &&
                                 within(fit_mn.coeffs.c, 1.253) &&
                                 within(fit_mg.coeffs.a, 1.09) && within(fit_mg.coeffs.b, 0.47);
        rep.report(7, "fit-recovery", noiseless_ok && measured_ok,
                   std::string("noiseless ") + (noiseless_ok ? "ok" : "off") +
                       "; measured normal (a,b,c)=(" + fixed(fit_mn.coeffs.a, 3) + "," +
                       fixed(fit_mn.coeffs.b, 3) + "," + fixed(fit_mn.coeffs.c, 3) +
                       ") gamma (a,b)=(" + fixed(fit_mg.coeffs.a, 3) + "," +
                       fixed(fit_mg.coeffs.b, 3) + ") (limits +-10%)");
    }

    // --- 8: worker-count invariance, byte level ---
    {
        MCConfig cfg;
        cfg.spec = normal_spec;
        cfg.replicates = 2000;
        cfg.n_grid = {10, 40, 160, 640};
        cfg.grid = grid;
        cfg.master_seed = options.seed + 7;
        cfg.workers = 1;
        const std::string csv1 = table_to_csv(sweep(cfg));
        cfg.workers = 4;
        const std::string csv4 = table_to_csv(sweep(cfg));
        rep.report(8, "determinism", csv1 == csv4,
                   csv1 == csv4 ? "1-worker and 4-worker sweeps byte-identical"
                                : "CSVs differ between worker counts");
    }

    // --- 9: bootstrap oracle agrees with the closed form ---
    {
        const double k = k_normal(0.9);
        double ratio_sum = 0.0;
        for (std::uint64_t i = 0; i < 20; ++i) {
            const auto draw = sample(normal_spec, 2000, make_stream(options.seed, 2000, i));
            const double boot =
                bootstrap_stderr(draw, 0.9, 2000, make_stream(options.seed, 2001, i));
            ratio_sum += boot / stderr_quantile(k, sample_sd(draw), 2000);
        }
        const double mean_ratio = ratio_sum / 20.0;
        rep.report(9, "bootstrap-oracle", mean_ratio >= 0.85 && mean_ratio <= 1.15,
                   "mean bootstrap/formula ratio = " + fixed(mean_ratio) +
                       " (limits [0.85,1.15])");
    }

    // --- 10: low gamma quantiles fall faster than N^(-1/2) ---
    {
        const auto fit = loglog_fit(gamma_table, gamma_spec.label(), 0.001, 10);
        rep.report(10, "low-gamma-anomaly", fit.slope < -0.53,
                   "slope(p=0.001, all N) = " + fixed(fit.slope, 3) + " (limit < -0.53)");
    }

    return rep.failures;
}

} // namespace qse
