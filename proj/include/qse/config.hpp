#ifndef QSE_CONFIG_HPP
#define QSE_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qse/analysis.hpp"
#include "qse/distributions.hpp"

namespace qse {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Everything a run needs, resolvable before any computation starts.
// Loadable from a flat key=value file; command-line flags override.
struct RunConfig {
    std::string family = "normal"; // normal | gamma | gamma-grid-49
    double mu = 0.0;
    double sigma = 1.0;
    double shape_k = 1.0;
    double scale_theta = 1.0;

    std::string n_grid_mode = "desk"; // desk | paper_full | explicit
    std::vector<long> n_grid_explicit;

    long replicates = 15000;
    std::uint64_t seed = 1;
    long n_floor = 3000;
    int workers = 0; // 0 = available parallelism (QSE_WORKERS overrides)

    BreakpointRule breakpoint; // window=5, slope_tol=0.08

    std::string out_dir = "out";
    bool emit_table1 = true;
    bool emit_fig1 = true;
    bool emit_fig2 = true;
    bool emit_fig3 = true;
    bool emit_scaling_csv = true;

    double table1_threshold_normal = 0.05;
    double table1_threshold_gamma = 0.08;

    // quantiles shown in the stderr-vs-N figures
    std::vector<double> fig_levels = {0.001, 0.01, 0.05, 0.1, 0.5, 0.9, 0.95, 0.99, 0.999};

    // distributions covered by the sweep: one spec, or the 49-combination
    // gamma parameter grid (k = 0.7..1.3 by 0.1, theta in {1,2,3,4,5,10,15})
    std::vector<DistributionSpec> resolve_specs() const;
    std::vector<long> resolve_n_grid() const;
    void validate() const; // throws ConfigError

    // canonical key=value text; feeds metadata sidecars
    std::string canonical_text() const;
};

// Parses `key = value` lines; '#' starts a comment. Unknown keys are errors
// (with the line number) so typos do not silently fall back to defaults.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

} // namespace qse

#endif
