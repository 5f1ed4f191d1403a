#ifndef QSE_CSV_HPP
#define QSE_CSV_HPP

#include <string>
#include <vector>

#include "qse/analysis.hpp"
#include "qse/mc_engine.hpp"

namespace qse {

// I/O failures (unwritable path, missing file) carry exit code 4;
// malformed content carries exit code 2. See cli for the mapping.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

// header: dist,family,param1,param2,N,p,stderr,mean_estimate,S_bar
std::string table_to_csv(const StdErrTable& table);
StdErrTable table_from_csv(const std::string& text);

// header: dist,p,slope,intercept_log10,K,n_min,n_used
// n_min serializes as a count, "none", or "N (unconstrained)".
std::string scaling_to_csv(const std::vector<ScalingResult>& results);
std::vector<ScalingResult> scaling_from_csv(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// FNV-1a, used to stamp metadata sidecars with a config fingerprint.
std::uint64_t fnv1a(const std::string& text);

// Writes `<path>.meta` describing how `path` was produced.
void write_metadata(const std::string& path, const std::string& config_text);

} // namespace qse

#endif
