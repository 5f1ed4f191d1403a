#include "qse/csv.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qse {

namespace {

constexpr const char* kVersion = "1.0.0";

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" + s + "'");
    return v;
}

long parse_long(const std::string& s, std::size_t line_no) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad count '" + s + "'");
    return v;
}

std::vector<std::string> data_lines(const std::string& text, const std::string& header,
                                    const char* what) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw ParseError(std::string(what) + ": missing or wrong header");
    std::vector<std::string> lines;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

static const std::string kTableHeader =
    "dist,family,param1,param2,N,p,stderr,mean_estimate,S_bar";

std::string table_to_csv(const StdErrTable& table) {
    std::string out = kTableHeader + "\n";
    for (const auto& r : table.rows) {
        out += r.dist;
        out += r.family == Family::Normal ? ",normal," : ",gamma,";
        out += format_double(r.param1);
        out += ',';
        out += format_double(r.param2);
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += format_double(r.p);
        out += ',';
        out += format_double(r.stderr_s);
        out += ',';
        out += format_double(r.mean_estimate);
        out += ',';
        out += format_double(r.s_bar);
        out += '\n';
    }
    return out;
}

StdErrTable table_from_csv(const std::string& text) {
    StdErrTable table;
    std::size_t line_no = 1;
    for (const auto& line : data_lines(text, kTableHeader, "sweep csv")) {
        ++line_no;
        const auto f = split(line, ',');
        if (f.size() != 9)
            throw ParseError("line " + std::to_string(line_no) + ": expected 9 fields");
        StdErrRow row;
        row.dist = f[0];
        if (f[1] == "normal")
            row.family = Family::Normal;
        else if (f[1] == "gamma")
            row.family = Family::Gamma;
        else
            throw ParseError("line " + std::to_string(line_no) + ": unknown family '" + f[1] +
                             "'");
        row.param1 = parse_double(f[2], line_no);
        row.param2 = parse_double(f[3], line_no);
        row.n = parse_long(f[4], line_no);
        row.p = parse_double(f[5], line_no);
        row.stderr_s = parse_double(f[6], line_no);
        row.mean_estimate = parse_double(f[7], line_no);
        row.s_bar = parse_double(f[8], line_no);
        table.rows.push_back(std::move(row));
    }
    return table;
}

static const std::string kScalingHeader = "dist,p,slope,intercept_log10,K,n_min,n_used";

std::string scaling_to_csv(const std::vector<ScalingResult>& results) {
    std::string out = kScalingHeader + "\n";
    for (const auto& r : results) {
        out += r.dist;
        out += ',';
        out += format_double(r.p);
        out += ',';
        out += format_double(r.slope);
        out += ',';
        out += format_double(r.intercept_log10);
        out += ',';
        out += format_double(r.k);
        out += ',';
        if (!r.n_min)
            out += "none";
        else if (r.n_min_unconstrained)
            out += std::to_string(*r.n_min) + " (unconstrained)";
        else
            out += std::to_string(*r.n_min);
        out += ',';
        out += std::to_string(r.n_used_for_fit);
        out += '\n';
    }
    return out;
}

std::vector<ScalingResult> scaling_from_csv(const std::string& text) {
    std::vector<ScalingResult> results;
    std::size_t line_no = 1;
    for (const auto& line : data_lines(text, kScalingHeader, "scaling csv")) {
        ++line_no;
        const auto f = split(line, ',');
        if (f.size() != 7)
            throw ParseError("line " + std::to_string(line_no) + ": expected 7 fields");
        ScalingResult r;
        r.dist = f[0];
        r.p = parse_double(f[1], line_no);
        r.slope = parse_double(f[2], line_no);
        r.intercept_log10 = parse_double(f[3], line_no);
        r.k = parse_double(f[4], line_no);
        if (f[5] == "none") {
            r.n_min = std::nullopt;
        } else if (const auto pos = f[5].find(" (unconstrained)"); pos != std::string::npos) {
            r.n_min = parse_long(f[5].substr(0, pos), line_no);
            r.n_min_unconstrained = true;
        } else {
            r.n_min = parse_long(f[5], line_no);
        }
        r.n_used_for_fit = parse_long(f[6], line_no);
        results.push_back(std::move(r));
    }
    return results;
}

void write_file(const std::string& path, const std::string& content) {
    const auto parent = std::filesystem::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_metadata(const std::string& path, const std::string& config_text) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a(config_text)));
    std::string meta;
    meta += "version = ";
    meta += kVersion;
    meta += "\nconfig_hash = ";
    meta += hash;
    meta += "\n";
    meta += config_text;
    if (!config_text.empty() && config_text.back() != '\n') meta += '\n';
    write_file(path + ".meta", meta);
}

} // namespace qse
