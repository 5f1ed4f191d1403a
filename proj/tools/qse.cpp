// qse: Monte Carlo quantile sampling-error toolkit.
//
// Subcommands: sweep, analyze, table1, plots, eval, selftest.
// Exit codes: 0 success, 2 config/parse error, 3 threshold failure, 4 I/O error.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "qse/analysis.hpp"
#include "qse/config.hpp"
#include "qse/csv.hpp"
#include "qse/formulas.hpp"
#include "qse/mc_engine.hpp"
#include "qse/reference.hpp"
#include "qse/selftest.hpp"
#include "qse/svg.hpp"

namespace {

using namespace qse;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitThreshold = 3;
constexpr int kExitIo = 4;

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

// Per-spec master seed: sweeps over several populations must not share
// random streams, so the configured seed is mixed with the spec label.
std::uint64_t spec_seed(std::uint64_t master_seed, const DistributionSpec& spec) {
    return detail::mix64(master_seed ^ fnv1a(spec.label()));
}

DistributionSpec spec_from_row(const StdErrRow& row) {
    return row.family == Family::Normal ? DistributionSpec::normal(row.param1, row.param2)
                                        : DistributionSpec::gamma(row.param1, row.param2);
}

void sort_rows(StdErrTable& table) {
    std::sort(table.rows.begin(), table.rows.end(), [](const auto& a, const auto& b) {
        return std::tie(a.dist, a.n, a.p) < std::tie(b.dist, b.n, b.p);
    });
}

// ---------------------------------------------------------------- sweep ---

int cmd_sweep(const RunConfig& cfg) {
    cfg.validate();
    const std::string csv_path = join_path(cfg.out_dir, "sweep.csv");
    write_metadata(csv_path, cfg.canonical_text()); // also probes writability

    StdErrTable table;
    const auto specs = cfg.resolve_specs();
    const auto n_grid = cfg.resolve_n_grid();
    for (const auto& spec : specs) {
        MCConfig mc;
        mc.spec = spec;
        mc.replicates = cfg.replicates;
        mc.n_grid = n_grid;
        mc.master_seed = spec_seed(cfg.seed, spec);
        mc.workers = cfg.workers;
        std::cerr << "sweep: " << spec.label() << " (" << n_grid.size() << " sizes, R="
                  << cfg.replicates << ")\n";
        auto part = sweep(mc);
        table.rows.insert(table.rows.end(), std::make_move_iterator(part.rows.begin()),
                          std::make_move_iterator(part.rows.end()));
    }
    sort_rows(table);
    write_file(csv_path, table_to_csv(table));
    std::cerr << "wrote " << csv_path << " (" << table.rows.size() << " rows)\n";
    return kExitOk;
}

// -------------------------------------------------------------- analyze ---

std::vector<ScalingResult> analyze_table(const StdErrTable& table, long n_floor,
                                         const BreakpointRule& rule) {
    // (dist, p) pairs in table order; spec reconstructed from the row params
    std::map<std::string, DistributionSpec> specs;
    std::map<std::string, std::set<double>> levels;
    for (const auto& row : table.rows) {
        specs.emplace(row.dist, spec_from_row(row));
        levels[row.dist].insert(row.p);
    }
    std::vector<ScalingResult> results;
    for (const auto& [dist, spec] : specs) {
        const double sigma = theoretical_sigma(spec);
        for (double p : levels[dist]) {
            const LineFit fit = loglog_fit(table, dist, p, n_floor);
            ScalingResult r;
            r.dist = dist;
            r.p = p;
            r.slope = fit.slope;
            r.intercept_log10 = fit.intercept_log10;
            r.k = std::pow(10.0, fit.intercept_log10) / sigma;
            r.n_used_for_fit = fit.n_used;
            try {
                auto [n_min, unconstrained] = detect_min_sample_size(table, dist, p, rule);
                r.n_min = n_min;
                r.n_min_unconstrained = unconstrained;
            } catch (const std::invalid_argument&) {
                // table too sparse for breakpoint detection; K is still valid
                r.n_min = std::nullopt;
            }
            results.push_back(std::move(r));
        }
    }
    return results;
}

int cmd_analyze(const std::string& table_path, long n_floor, const BreakpointRule& rule,
                const std::string& out_path) {
    const StdErrTable table = table_from_csv(read_file(table_path));
    const auto results = analyze_table(table, n_floor, rule);
    write_file(out_path, scaling_to_csv(results));
    std::ostringstream meta;
    meta << "source = " << table_path << "\nn_floor = " << n_floor
         << "\nbreakpoint_window = " << rule.window
         << "\nbreakpoint_slope_tol = " << format_double(rule.slope_tol) << "\n";
    write_metadata(out_path, meta.str());
    std::cerr << "wrote " << out_path << " (" << results.size() << " rows)\n";
    return kExitOk;
}

// --------------------------------------------------------------- table1 ---

const ScalingResult* find_level(const std::vector<ScalingResult>& results, Family family,
                                double p) {
    const std::string prefix = family == Family::Normal ? "normal-" : "gamma-";
    for (const auto& r : results)
        if (r.dist.rfind(prefix, 0) == 0 && std::abs(r.p - p) < 1e-12) return &r;
    return nullptr;
}

int cmd_table1(const std::vector<std::string>& scaling_paths, double threshold_normal,
               double threshold_gamma, const std::string& out_prefix) {
    std::vector<ScalingResult> results;
    for (const auto& path : scaling_paths) {
        auto part = scaling_from_csv(read_file(path));
        results.insert(results.end(), part.begin(), part.end());
    }

    std::string csv = "dist,p,K_numerical,K_formula,paper_numerical,paper_formula,"
                      "rel_dev_numerical,rel_dev_formula\n";
    std::ostringstream text;
    text << "Scaling coefficients K(q_p), standard parameters\n"
         << std::left << std::setw(8) << "dist" << std::setw(8) << "p" << std::setw(12)
         << "K_num" << std::setw(12) << "K_formula" << std::setw(12) << "paper_num"
         << std::setw(14) << "paper_formula" << std::setw(10) << "dev_num"
         << "dev_formula\n";

    double worst_normal = 0.0, worst_gamma = 0.0;
    for (int is_gamma = 0; is_gamma <= 1; ++is_gamma) {
        const Family family = is_gamma ? Family::Gamma : Family::Normal;
        for (std::size_t i = 0; i < reference::table1_levels.size(); ++i) {
            const double p = reference::table1_levels[i];
            const ScalingResult* r = find_level(results, family, p);
            if (!r)
                throw ParseError("table1: level p=" + format_double(p) + " missing for " +
                                 (is_gamma ? "gamma" : "normal"));
            const double k_formula = is_gamma ? k_gamma(p) : k_normal(p);
            const double paper_num = is_gamma ? reference::table1_gamma_numerical[i]
                                              : reference::table1_normal_numerical[i];
            const double paper_formula = is_gamma ? reference::table1_gamma_formula[i]
                                                  : reference::table1_normal_formula[i];
            const double dev_num = std::abs(r->k - paper_num) / paper_num;
            const double dev_formula = std::abs(k_formula - paper_formula) / paper_formula;
            (is_gamma ? worst_gamma : worst_normal) =
                std::max(is_gamma ? worst_gamma : worst_normal, dev_num);

            csv += (is_gamma ? std::string("gamma,") : std::string("normal,")) +
                   format_double(p) + ',' + format_double(r->k) + ',' +
                   format_double(k_formula) + ',' + format_double(paper_num) + ',' +
                   format_double(paper_formula) + ',' + format_double(dev_num) + ',' +
                   format_double(dev_formula) + '\n';
            text << std::left << std::setw(8) << (is_gamma ? "gamma" : "normal")
                 << std::setw(8) << p << std::setw(12) << std::setprecision(5) << r->k
                 << std::setw(12) << k_formula << std::setw(12) << paper_num << std::setw(14)
                 << paper_formula << std::setw(10) << std::setprecision(3) << dev_num
                 << dev_formula << "\n";
        }
    }
    text << "\nworst relative deviation vs reference numerical column: normal "
         << worst_normal << " (limit " << threshold_normal << "), gamma " << worst_gamma
         << " (limit " << threshold_gamma << ")\n";

    write_file(out_prefix + ".csv", csv);
    write_file(out_prefix + ".txt", text.str());
    std::cerr << "wrote " << out_prefix << ".csv and .txt\n";
    if (worst_normal > threshold_normal || worst_gamma > threshold_gamma) {
        std::cerr << "table1: deviation threshold exceeded\n";
        return kExitThreshold;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- plots ---

int cmd_plots(const std::string& table_path, const std::string& scaling_path,
              const std::string& out_dir, const std::vector<double>& levels) {
    const StdErrTable table = table_from_csv(read_file(table_path));
    const auto scaling = scaling_from_csv(read_file(scaling_path));

    std::map<std::string, Family> dists;
    for (const auto& row : table.rows) dists[row.dist] = row.family;

    // fig1 / fig2: same (N, stderr) pairs; the views differ only in the
    // axis-scaling metadata and the SVG transform
    std::string series_csv = "dist,p,N,stderr\n";
    std::map<std::string, std::vector<PlotSeries>> svg_series;
    for (const auto& [dist, family] : dists) {
        (void)family;
        for (double p : levels) {
            PlotSeries s;
            s.name = "p=" + format_double(p);
            for (const auto& row : table.rows) {
                if (row.dist != dist || std::abs(row.p - p) > 1e-12) continue;
                series_csv += dist + ',' + format_double(p) + ',' + std::to_string(row.n) +
                              ',' + format_double(row.stderr_s) + '\n';
                s.points.emplace_back(static_cast<double>(row.n), row.stderr_s);
            }
            if (!s.points.empty()) svg_series[dist].push_back(std::move(s));
        }
    }
    for (int fig = 1; fig <= 2; ++fig) {
        const bool log_axes = fig == 2;
        const std::string base = "fig" + std::to_string(fig);
        write_file(join_path(out_dir, base + ".csv"), series_csv);
        write_metadata(join_path(out_dir, base + ".csv"),
                       std::string("axes = ") + (log_axes ? "log-log" : "linear") +
                           "\nsource = " + table_path + "\n");
        for (const auto& [dist, series] : svg_series) {
            PlotOptions opt;
            opt.title = "sampling error of quantile estimates, " + dist;
            opt.x_label = log_axes ? "N (log)" : "N";
            opt.y_label = log_axes ? "stderr (log)" : "stderr";
            opt.log_x = opt.log_y = log_axes;
            write_file(join_path(out_dir, base + "-" + dist + ".svg"),
                       render_svg_plot(series, opt));
        }
    }

    // fig3: measured K vs p with the closed-form overlay at 200 points
    std::string fig3_csv = "dist,series,p,K\n";
    std::map<std::string, std::vector<PlotSeries>> fig3_series;
    for (const auto& [dist, family] : dists) {
        PlotSeries measured{"measured", {}};
        std::vector<std::pair<double, ScalingResult>> rows;
        for (const auto& r : scaling)
            if (r.dist == dist) rows.emplace_back(r.p, r);
        std::sort(rows.begin(), rows.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [p, r] : rows) {
            fig3_csv += dist + ",measured," + format_double(p) + ',' + format_double(r.k) + '\n';
            measured.points.emplace_back(p, r.k);
        }
        PlotSeries overlay{family == Family::Normal ? "eq. K_normal" : "eq. K_gamma", {}};
        // 200 points uniform in logit(p) over [0.001, 0.999]
        const double lo = std::log(0.001 / 0.999);
        const double hi = -lo;
        for (int i = 0; i < 200; ++i) {
            const double t = lo + (hi - lo) * i / 199.0;
            const double p = 1.0 / (1.0 + std::exp(-t));
            const double k = family == Family::Normal ? k_normal(p) : k_gamma(p);
            fig3_csv += dist + ",formula," + format_double(p) + ',' + format_double(k) + '\n';
            overlay.points.emplace_back(p, k);
        }
        fig3_series[dist] = {std::move(measured), std::move(overlay)};
    }
    write_file(join_path(out_dir, "fig3.csv"), fig3_csv);
    write_metadata(join_path(out_dir, "fig3.csv"),
                   "axes = linear\nsource = " + scaling_path + "\n");
    for (const auto& [dist, series] : fig3_series) {
        PlotOptions opt;
        opt.title = "scaling coefficient K(q_p), " + dist;
        opt.x_label = "p";
        opt.y_label = "K";
        write_file(join_path(out_dir, "fig3-" + dist + ".svg"), render_svg_plot(series, opt));
    }
    std::cerr << "wrote fig1/fig2/fig3 series and SVGs to " << out_dir << "\n";
    return kExitOk;
}

// ----------------------------------------------------------------- eval ---

int cmd_eval(const std::string& family, double p, long n, std::optional<double> s_opt,
             const DistributionSpec& spec, const std::string& scaling_path) {
    const bool is_gamma = family == "gamma";
    const double k = is_gamma ? k_gamma(p) : k_normal(p);
    const double s = s_opt ? *s_opt : theoretical_sigma(spec);
    const double se = stderr_quantile(k, s, n);
    std::cout << "K(" << format_double(p) << ") = " << format_double(k) << "\n"
              << "expected stderr = K*S/sqrt(N) = " << format_double(se) << "  (S="
              << format_double(s) << ", N=" << n << ")\n";

    std::optional<long> required;
    if (!is_gamma || scaling_path.empty()) {
        // built-in normal breakpoints, mirrored at the low tail
        if (p >= 0.999 || p <= 0.001) required = reference::n_min_q999;
        else if (p >= 0.99 || p <= 0.01) required = reference::n_min_q99;
    } else {
        // measured gamma breakpoint at the closest tabulated level
        const auto scaling = scaling_from_csv(read_file(scaling_path));
        double best_gap = 1e9;
        for (const auto& r : scaling) {
            if (r.dist.rfind("gamma-", 0) != 0 || !r.n_min || r.n_min_unconstrained) continue;
            const double gap = std::abs(r.p - p);
            if (gap < best_gap) {
                best_gap = gap;
                required = *r.n_min;
            }
        }
    }
    if (required && n < *required)
        std::cout << "warning: N=" << n << " is below the minimum sample size of about "
                  << *required << " required for reliable estimation at p="
                  << format_double(p) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo sampling errors of quantile estimates"};
    app.require_subcommand(1);

    // ---- sweep ----
    auto* sc_sweep = app.add_subcommand("sweep", "run the Monte Carlo sweep, emit sweep.csv");
    std::string cfg_path;
    std::optional<std::string> o_family, o_mode, o_out;
    std::optional<double> o_mu, o_sigma, o_shape, o_scale;
    std::optional<long> o_replicates, o_n_floor;
    std::optional<std::uint64_t> o_seed;
    std::optional<int> o_workers;
    std::vector<long> o_n_list;
    sc_sweep->add_option("--config", cfg_path, "flat key=value config file");
    sc_sweep->add_option("--family", o_family, "normal | gamma | gamma-grid-49");
    sc_sweep->add_option("--mu", o_mu, "normal location");
    sc_sweep->add_option("--sigma", o_sigma, "normal scale");
    sc_sweep->add_option("--shape", o_shape, "gamma shape k");
    sc_sweep->add_option("--scale", o_scale, "gamma scale theta");
    sc_sweep->add_option("--n-grid", o_mode, "desk | paper_full | explicit");
    sc_sweep->add_option("--n-list", o_n_list, "explicit N values")->delimiter(',');
    sc_sweep->add_option("--replicates", o_replicates, "replicates per (N, distribution)");
    sc_sweep->add_option("--seed", o_seed, "master seed");
    sc_sweep->add_option("--workers", o_workers, "worker threads (0 = auto)");
    sc_sweep->add_option("--out", o_out, "output directory");

    // ---- analyze ----
    auto* sc_analyze = app.add_subcommand("analyze", "extract slopes, K and breakpoints");
    std::string an_table, an_out = "scaling.csv";
    long an_floor = 3000;
    BreakpointRule an_rule;
    sc_analyze->add_option("--table", an_table, "sweep CSV")->required();
    sc_analyze->add_option("--n-floor", an_floor, "smallest N entering the K fit");
    sc_analyze->add_option("--window", an_rule.window, "breakpoint slope window");
    sc_analyze->add_option("--slope-tol", an_rule.slope_tol, "breakpoint slope tolerance");
    sc_analyze->add_option("--out", an_out, "scaling CSV path");

    // ---- table1 ----
    auto* sc_table1 = app.add_subcommand("table1", "compare K against the reference table");
    std::vector<std::string> t1_scaling;
    std::string t1_out = "table1";
    double t1_thr_normal = 0.05, t1_thr_gamma = 0.08;
    sc_table1->add_option("--scaling", t1_scaling, "scaling CSV (repeatable)")->required();
    sc_table1->add_option("--threshold-normal", t1_thr_normal, "max rel deviation, normal");
    sc_table1->add_option("--threshold-gamma", t1_thr_gamma, "max rel deviation, gamma");
    sc_table1->add_option("--out", t1_out, "output prefix (.csv/.txt)");

    // ---- plots ----
    auto* sc_plots = app.add_subcommand("plots", "emit figure series CSVs and SVGs");
    std::string pl_table, pl_scaling, pl_out = "plots";
    std::vector<double> pl_levels = {0.001, 0.01, 0.05, 0.1, 0.5, 0.9, 0.95, 0.99, 0.999};
    sc_plots->add_option("--table", pl_table, "sweep CSV")->required();
    sc_plots->add_option("--scaling", pl_scaling, "scaling CSV")->required();
    sc_plots->add_option("--levels", pl_levels, "quantile levels to draw")->delimiter(',');
    sc_plots->add_option("--out", pl_out, "output directory");

    // ---- eval ----
    auto* sc_eval = app.add_subcommand("eval", "expected stderr of a quantile estimate");
    std::string ev_family = "normal", ev_scaling;
    double ev_p = 0.5, ev_mu = 0.0, ev_sigma = 1.0, ev_shape = 1.0, ev_scale = 1.0;
    long ev_n = 0;
    std::optional<double> ev_s;
    sc_eval->add_option("--family", ev_family, "normal | gamma");
    sc_eval->add_option("--p", ev_p, "quantile level in [0.001, 0.999]")->required();
    sc_eval->add_option("--n", ev_n, "sample size")->required();
    sc_eval->add_option("--s", ev_s, "sample standard deviation (default: population sigma)");
    sc_eval->add_option("--mu", ev_mu, "normal location");
    sc_eval->add_option("--sigma", ev_sigma, "normal scale");
    sc_eval->add_option("--shape", ev_shape, "gamma shape k");
    sc_eval->add_option("--scale", ev_scale, "gamma scale theta");
    sc_eval->add_option("--scaling", ev_scaling, "scaling CSV with measured gamma breakpoints");

    // ---- selftest ----
    auto* sc_selftest = app.add_subcommand("selftest", "run the acceptance battery");
    SelfTestOptions st;
    sc_selftest->add_option("--replicates", st.replicates, "replicates per sweep point");
    sc_selftest->add_option("--seed", st.seed, "master seed");
    sc_selftest->add_option("--workers", st.workers, "worker threads (0 = auto)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (sc_sweep->parsed()) {
            RunConfig cfg = cfg_path.empty() ? RunConfig{} : load_config(cfg_path);
            if (o_family) cfg.family = *o_family;
            if (o_mu) cfg.mu = *o_mu;
            if (o_sigma) cfg.sigma = *o_sigma;
            if (o_shape) cfg.shape_k = *o_shape;
            if (o_scale) cfg.scale_theta = *o_scale;
            if (o_mode) cfg.n_grid_mode = *o_mode;
            if (!o_n_list.empty()) {
                cfg.n_grid_explicit = o_n_list;
                cfg.n_grid_mode = "explicit";
            }
            if (o_replicates) cfg.replicates = *o_replicates;
            if (o_seed) cfg.seed = *o_seed;
            if (o_n_floor) cfg.n_floor = *o_n_floor;
            if (o_workers) cfg.workers = *o_workers;
            if (o_out) cfg.out_dir = *o_out;
            return cmd_sweep(cfg);
        }
        if (sc_analyze->parsed()) return cmd_analyze(an_table, an_floor, an_rule, an_out);
        if (sc_table1->parsed())
            return cmd_table1(t1_scaling, t1_thr_normal, t1_thr_gamma, t1_out);
        if (sc_plots->parsed()) return cmd_plots(pl_table, pl_scaling, pl_out, pl_levels);
        if (sc_eval->parsed()) {
            const DistributionSpec spec = ev_family == "gamma"
                                              ? DistributionSpec::gamma(ev_shape, ev_scale)
                                              : DistributionSpec::normal(ev_mu, ev_sigma);
            return cmd_eval(ev_family, ev_p, ev_n, ev_s, spec, ev_scaling);
        }
        if (sc_selftest->parsed()) {
            const int failures = run_acceptance(st, std::cout);
            std::cout << (failures == 0 ? "selftest: all criteria passed\n"
                                        : "selftest: " + std::to_string(failures) +
                                              " criteria failed\n");
            return failures == 0 ? kExitOk : kExitThreshold;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
