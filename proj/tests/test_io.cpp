#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "qse/config.hpp"
#include "qse/csv.hpp"
#include "qse/mc_engine.hpp"

using namespace qse;

TEST_CASE("format_double round-trips arbitrary doubles") {
    CounterRng rng(make_stream(61, 0, 0));
    for (int i = 0; i < 200; ++i) {
        const double v = (rng.next_unit() - 0.5) * std::pow(10.0, 20.0 * rng.next_unit() - 10.0);
        const std::string s = format_double(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("sweep table CSV round-trip is lossless") {
    MCConfig cfg;
    cfg.spec = DistributionSpec::gamma(0.7, 10.0);
    cfg.replicates = 60;
    cfg.n_grid = {10, 40};
    cfg.grid = QuantileGrid({0.1, 0.5, 0.9});
    cfg.master_seed = 77;
    const auto table = sweep(cfg);
    const std::string csv = table_to_csv(table);
    const auto parsed = table_from_csv(csv);
    CHECK(table_to_csv(parsed) == csv);
    CHECK(parsed.rows.size() == 6);
    CHECK(parsed.rows[0].family == Family::Gamma);
    CHECK(parsed.rows[0].param1 == 0.7);
}

TEST_CASE("scaling CSV round-trip covers every n_min variant") {
    std::vector<ScalingResult> results(3);
    results[0] = {"normal-0-1", 0.5, -0.5001, 0.0987, 1.2553, 55, false, 7};
    results[1] = {"normal-0-1", 0.9, -0.49, 0.2331, 1.7101, std::nullopt, false, 7};
    results[2] = {"gamma-1-1", 0.1, -0.52, -0.4823, 0.3293, 10, true, 7};
    const std::string csv = scaling_to_csv(results);
    const auto parsed = scaling_from_csv(csv);
    CHECK(scaling_to_csv(parsed) == csv);
    CHECK(parsed[0].n_min == 55);
    CHECK_FALSE(parsed[1].n_min.has_value());
    CHECK(parsed[2].n_min_unconstrained);
}

TEST_CASE("parse errors carry row context") {
    CHECK_THROWS_AS(table_from_csv("bogus header\n"), ParseError);
    const std::string bad = "dist,family,param1,param2,N,p,stderr,mean_estimate,S_bar\n"
                            "normal-0-1,normal,0,1,100,0.5,xyz,0,1\n";
    CHECK_THROWS_WITH_AS(table_from_csv(bad), doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_AS(scaling_from_csv("dist,p\nx,0.5\n"), ParseError);
}

TEST_CASE("file I/O and metadata sidecar") {
    const auto dir = std::filesystem::temp_directory_path() / "qse_io_test";
    std::filesystem::remove_all(dir);
    const std::string path = (dir / "out.csv").string();
    write_file(path, "hello\n");
    CHECK(read_file(path) == "hello\n");
    write_metadata(path, "seed = 1\n");
    const std::string meta = read_file(path + ".meta");
    CHECK(meta.find("config_hash = ") != std::string::npos);
    CHECK(meta.find("seed = 1") != std::string::npos);
    CHECK_THROWS_AS(read_file((dir / "missing.csv").string()), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("config defaults and parsing") {
    const RunConfig defaults;
    CHECK(defaults.replicates == 15000);
    CHECK(defaults.n_floor == 3000);
    CHECK(defaults.breakpoint.window == 5);
    CHECK(defaults.breakpoint.slope_tol == 0.08);
    CHECK(defaults.resolve_n_grid().size() == 24);

    const auto cfg = parse_config("# comment\n"
                                  "family = gamma\n"
                                  "shape_k = 0.8\n"
                                  "scale_theta = 2\n"
                                  "replicates = 500\n"
                                  "seed = 42\n"
                                  "n_grid = 10, 20, 40\n");
    CHECK(cfg.family == "gamma");
    CHECK(cfg.replicates == 500);
    CHECK(cfg.seed == 42);
    CHECK(cfg.n_grid_mode == "explicit");
    CHECK(cfg.resolve_n_grid() == std::vector<long>{10, 20, 40});
    const auto specs = cfg.resolve_specs();
    REQUIRE(specs.size() == 1);
    CHECK(specs[0].shape_k == 0.8);
}

TEST_CASE("config rejects unknown keys and bad values with line numbers") {
    CHECK_THROWS_WITH_AS(parse_config("family = normal\nnope = 1\n"),
                         doctest::Contains("line 2"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("replicates = many\n"), doctest::Contains("line 1"),
                         ConfigError);
    RunConfig cfg;
    cfg.n_grid_mode = "weird";
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.n_grid_mode = "desk";
    cfg.replicates = 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("the 49-combination gamma grid") {
    RunConfig cfg;
    cfg.family = "gamma-grid-49";
    const auto specs = cfg.resolve_specs();
    CHECK(specs.size() == 49);
    // corners of the parameter grid
    bool low = false, high = false;
    for (const auto& s : specs) {
        if (s.shape_k == 0.7 && s.scale_theta == 1.0) low = true;
        if (s.shape_k == 1.3 && s.scale_theta == 15.0) high = true;
        CHECK(s.family == Family::Gamma);
    }
    CHECK(low);
    CHECK(high);
}

TEST_CASE("canonical config text is stable") {
    RunConfig cfg;
    cfg.seed = 99;
    const std::string a = cfg.canonical_text();
    const std::string b = cfg.canonical_text();
    CHECK(a == b);
    CHECK(a.find("seed = 99") != std::string::npos);
    CHECK(fnv1a(a) == fnv1a(b));
}
