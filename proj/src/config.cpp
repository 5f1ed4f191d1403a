#include "qse/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "qse/csv.hpp"
#include "qse/mc_engine.hpp"

namespace qse {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, std::size_t line_no) {
    double d = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError("config line " + std::to_string(line_no) + ": bad number '" + v + "'");
    return d;
}

long to_long(const std::string& v, std::size_t line_no) {
    long d = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError("config line " + std::to_string(line_no) + ": bad integer '" + v + "'");
    return d;
}

bool to_bool(const std::string& v, std::size_t line_no) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config line " + std::to_string(line_no) + ": bad bool '" + v + "'");
}

template <typename T, typename F>
std::vector<T> to_list(const std::string& v, std::size_t line_no, F conv) {
    std::vector<T> out;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(conv(item, line_no));
    }
    return out;
}

} // namespace

std::vector<DistributionSpec> RunConfig::resolve_specs() const {
    if (family == "normal") return {DistributionSpec::normal(mu, sigma)};
    if (family == "gamma") return {DistributionSpec::gamma(shape_k, scale_theta)};
    if (family == "gamma-grid-49") {
        std::vector<DistributionSpec> specs;
        for (int ki = 7; ki <= 13; ++ki)
            for (double theta : {1.0, 2.0, 3.0, 4.0, 5.0, 10.0, 15.0})
                specs.push_back(DistributionSpec::gamma(ki / 10.0, theta));
        return specs;
    }
    throw ConfigError("unknown family '" + family + "'");
}

std::vector<long> RunConfig::resolve_n_grid() const {
    if (n_grid_mode == "desk") return default_n_grid(NGridMode::Desk);
    if (n_grid_mode == "paper_full") return default_n_grid(NGridMode::PaperFull);
    if (n_grid_mode == "explicit") {
        if (n_grid_explicit.empty())
            throw ConfigError("n_grid_mode=explicit requires a non-empty n_grid list");
        return n_grid_explicit;
    }
    throw ConfigError("unknown n_grid_mode '" + n_grid_mode + "'");
}

void RunConfig::validate() const {
    for (const auto& spec : resolve_specs()) spec.validate();
    const auto grid = resolve_n_grid();
    long prev = 0;
    for (long n : grid) {
        if (n < 10) throw ConfigError("n_grid values must be >= 10");
        if (n <= prev) throw ConfigError("n_grid must be strictly increasing");
        prev = n;
    }
    if (replicates < 2) throw ConfigError("replicates must be >= 2");
    if (n_floor < 10) throw ConfigError("n_floor must be >= 10");
    if (breakpoint.window < 3) throw ConfigError("breakpoint_window must be >= 3");
    if (!(breakpoint.slope_tol > 0)) throw ConfigError("breakpoint_slope_tol must be > 0");
    if (out_dir.empty()) throw ConfigError("out_dir must be set");
}

std::string RunConfig::canonical_text() const {
    std::ostringstream os;
    os << "family = " << family << "\n";
    if (family == "normal")
        os << "mu = " << format_double(mu) << "\nsigma = " << format_double(sigma) << "\n";
    else if (family == "gamma")
        os << "shape_k = " << format_double(shape_k)
           << "\nscale_theta = " << format_double(scale_theta) << "\n";
    os << "n_grid_mode = " << n_grid_mode << "\n";
    if (n_grid_mode == "explicit") {
        os << "n_grid = ";
        for (std::size_t i = 0; i < n_grid_explicit.size(); ++i)
            os << (i ? "," : "") << n_grid_explicit[i];
        os << "\n";
    }
    os << "replicates = " << replicates << "\n";
    os << "seed = " << seed << "\n";
    os << "n_floor = " << n_floor << "\n";
    os << "breakpoint_window = " << breakpoint.window << "\n";
    os << "breakpoint_slope_tol = " << format_double(breakpoint.slope_tol) << "\n";
    return os.str();
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "family") cfg.family = val;
        else if (key == "mu") cfg.mu = to_double(val, line_no);
        else if (key == "sigma") cfg.sigma = to_double(val, line_no);
        else if (key == "shape_k") cfg.shape_k = to_double(val, line_no);
        else if (key == "scale_theta") cfg.scale_theta = to_double(val, line_no);
        else if (key == "n_grid_mode") cfg.n_grid_mode = val;
        else if (key == "n_grid") {
            cfg.n_grid_explicit = to_list<long>(val, line_no, to_long);
            cfg.n_grid_mode = "explicit";
        }
        else if (key == "replicates") cfg.replicates = to_long(val, line_no);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_long(val, line_no));
        else if (key == "n_floor") cfg.n_floor = to_long(val, line_no);
        else if (key == "workers") cfg.workers = static_cast<int>(to_long(val, line_no));
        else if (key == "breakpoint_window")
            cfg.breakpoint.window = static_cast<int>(to_long(val, line_no));
        else if (key == "breakpoint_slope_tol") cfg.breakpoint.slope_tol = to_double(val, line_no);
        else if (key == "out_dir") cfg.out_dir = val;
        else if (key == "emit_table1") cfg.emit_table1 = to_bool(val, line_no);
        else if (key == "emit_fig1") cfg.emit_fig1 = to_bool(val, line_no);
        else if (key == "emit_fig2") cfg.emit_fig2 = to_bool(val, line_no);
        else if (key == "emit_fig3") cfg.emit_fig3 = to_bool(val, line_no);
        else if (key == "emit_scaling_csv") cfg.emit_scaling_csv = to_bool(val, line_no);
        else if (key == "table1_threshold_normal")
            cfg.table1_threshold_normal = to_double(val, line_no);
        else if (key == "table1_threshold_gamma")
            cfg.table1_threshold_gamma = to_double(val, line_no);
        else if (key == "fig_levels") cfg.fig_levels = to_list<double>(val, line_no, to_double);
        else
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                              key + "'");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

} // namespace qse
