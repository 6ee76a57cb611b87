#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "esnoise/cli/config.hpp"
#include "esnoise/cli/csv.hpp"
#include "esnoise/cli/scenario.hpp"
#include "esnoise/cli/svg.hpp"
#include "esnoise/kernels.hpp"

using namespace esnoise;
using namespace esnoise::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("esnoise_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunConfig tiny_scenario_config(const std::string& scenario) {
    RunConfig cfg;
    cfg.set("scenario", scenario);
    cfg.set("trials", "50");
    cfg.set("signal_length", "40");
    return resolve_scenario(scenario_from_string(scenario), cfg);
}

}  // namespace

TEST_SUITE_BEGIN("expcli");

TEST_CASE("empty config yields the canonical defaults") {
    const RunConfig cfg = parse_config("");
    CHECK(cfg.n_reservoir == 100);
    CHECK(cfg.d_add == 1e-2);
    CHECK(cfg.d_mul == 1e-2);
    CHECK(cfg.signal_length == 200);
    CHECK(cfg.trials == 1000);
    CHECK(cfg.resolved_beta() == 1.0);
    CHECK(cfg.gamma == 0.0);
}

TEST_CASE("gamma implies beta unless beta is given") {
    const RunConfig cfg = parse_config("gamma = 0.5\n");
    CHECK(cfg.gamma == 0.5);
    CHECK(cfg.resolved_beta() == 0.5);
    CHECK_NOTHROW(cfg.esn_params());

    CHECK_THROWS_AS(parse_config("gamma = 0.4\nbeta = 0.4\n"),
                    ConstraintViolation);
    CHECK_NOTHROW(parse_config("gamma = 0.4\nbeta = 0.6\n"));
}

TEST_CASE("out-of-range values are constraint violations") {
    CHECK_THROWS_AS(parse_config("gamma = 1.5\n"), ConstraintViolation);
    CHECK_THROWS_AS(parse_config("d_add = -0.01\n"), ConstraintViolation);
    CHECK_THROWS_AS(parse_config("n_reservoir = 0\n"), ConstraintViolation);
    CHECK_THROWS_AS(parse_config("topology = diagonal\nzeta = 60\n"),
                    BandTooWide);
}

TEST_CASE("unknown keys and bad values are hard errors with locations") {
    CHECK_THROWS_AS(parse_config("gamm = 0.5\n"), UnknownKey);
    try {
        parse_config("# comment\ngamma = banana\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_config("topology = ring\n"), ParseError);
    CHECK_THROWS_AS(parse_config("just a line\n"), ParseError);
}

TEST_CASE("comments, blank lines and manifest csv form all parse") {
    const RunConfig a = parse_config(
        "# full line comment\n"
        "\n"
        "gamma = 0.25   # trailing comment\n"
        "zeta = 7\n");
    CHECK(a.gamma == 0.25);
    CHECK(a.zeta == 7);

    const RunConfig b = parse_config(
        "key,value\n"
        "gamma,0.25\n"
        "gamma_grid,0,0.5,0.9\n");
    CHECK(b.gamma == 0.25);
    CHECK(b.gamma_grid == std::vector<double>{0.0, 0.5, 0.9});
}

TEST_CASE("csv emission format") {
    Table t;
    t.header = {"a", "b"};
    CHECK_THROWS_AS(to_csv_string(t), IOError);  // no rows

    t.rows.push_back({0.1, std::string("x")});
    CHECK(to_csv_string(t) == "a,b\n0.10000000000000001,x\n");

    const fs::path dir = fresh_dir("csv");
    Table empty;
    CHECK_THROWS_AS(emit_csv(empty, dir / "no.csv"), IOError);
    CHECK_FALSE(fs::exists(dir / "no.csv"));  // error leaves no file behind
}

TEST_CASE("csv doubles survive a round trip bitwise") {
    Table t;
    t.header = {"v"};
    const std::vector<double> values{1.0 / 3.0, 1e-300,  -0.0,
                                     5e-324,    1.25e17, 0.30364122471313626};
    for (double v : values) t.rows.push_back({v});
    const Table back = parse_csv(to_csv_string(t));
    REQUIRE(back.rows.size() == values.size());
    for (size_t i = 0; i < values.size(); ++i) {
        const double got = std::get<double>(back.rows[i][0]);
        CHECK(std::memcmp(&got, &values[i], sizeof(double)) == 0);
    }
}

TEST_CASE("svg emission") {
    std::vector<Series> series{
        {"a", {0, 1, 2}, {1.0, 4.0, 9.0}, false},
        {"b", {0, 1, 2}, {2.0, 2.5, 2.25}, true},
    };
    const std::string svg = to_svg_string(series, {"title", "x", "y"});
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("title") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);

    CHECK_THROWS_AS(to_svg_string({}, {"t", "x", "y"}), IOError);
    const double nan = std::nan("");
    CHECK_THROWS_AS(
        to_svg_string({Series{"n", {0.0}, {nan}, false}}, {"t", "x", "y"}),
        IOError);
    // gaps are skipped, finite points keep the chart valid
    CHECK_NOTHROW(to_svg_string({Series{"g", {0, 1, 2}, {1.0, nan, 2.0}, false}},
                                {"t", "x", "y"}));
}

TEST_CASE("scenario presets fill gaps but never override the user") {
    RunConfig cfg;
    cfg.set("gamma", "0.33");
    const RunConfig resolved =
        resolve_scenario(ScenarioName::EsnDiagonal, cfg);
    CHECK(resolved.gamma == 0.33);  // preset 0.8 must not clobber
    CHECK(resolved.topology == "diagonal");
    CHECK(resolved.signal == "sine");

    const RunConfig plain =
        resolve_scenario(ScenarioName::EsnDiagonal, RunConfig{});
    CHECK(plain.gamma == 0.8);
}

TEST_CASE("every scenario runs, emits its panels and a manifest") {
    for (const std::string& name : scenario_names()) {
        RunConfig cfg = tiny_scenario_config(name);
        if (name == "one_neuron_alpha_sweep") {
            cfg.set("alpha_grid", "0.5,1");
            cfg.set("x_grid", "-1,0,1");
        }
        if (name == "esn_gamma_sweep" || name == "esn_zeta_compare")
            cfg.set("gamma_grid", "0,0.5");
        cfg.set("n_reservoir", "50");

        const fs::path dir = fresh_dir("scenario_" + name);
        const ScenarioResult result = run_scenario(cfg, dir);
        CHECK(result.artifacts.size() >= 2);
        CHECK(fs::exists(dir / "manifest.csv"));
        bool has_csv = false, has_svg = false;
        for (const auto& p : result.artifacts) {
            if (p.extension() == ".csv") has_csv = true;
            if (p.extension() == ".svg") has_svg = true;
        }
        CHECK(has_csv);
        CHECK(has_svg);
    }
}

TEST_CASE("manifest lists every consumed parameter and replays bitwise") {
    RunConfig cfg = tiny_scenario_config("esn_uniform");
    cfg.set("n_reservoir", "40");
    const fs::path dir = fresh_dir("replay_src");
    run_scenario(cfg, dir);

    const std::string manifest = slurp(dir / "manifest.csv");
    for (const char* key :
         {"scenario", "seed", "trials", "n_reservoir", "alpha", "beta", "gamma",
          "d_add", "d_mul", "topology", "zeta", "kernel", "boundary", "signal",
          "signal_seed", "signal_length", "transient_discard", "gamma_grid",
          "code_version"})
        CHECK(manifest.find(key) != std::string::npos);

    // replay purely from the manifest
    RunConfig replay = load_config(dir / "manifest.csv");
    replay = resolve_scenario(scenario_from_string(replay.scenario), replay);
    const fs::path dir2 = fresh_dir("replay_dst");
    run_scenario(replay, dir2);

    int compared = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".csv") continue;
        if (entry.path().filename() == "manifest.csv") continue;
        CHECK(slurp(entry.path()) == slurp(dir2 / entry.path().filename()));
        ++compared;
    }
    CHECK(compared >= 1);
}

TEST_CASE("worker count does not change emitted bytes") {
    RunConfig base = tiny_scenario_config("esn_uniform");
    base.set("n_reservoir", "30");

    RunConfig one = base;
    one.set("threads", "1");
    RunConfig four = base;
    four.set("threads", "4");

    const fs::path d1 = fresh_dir("workers1");
    const fs::path d4 = fresh_dir("workers4");
    run_scenario(one, d1);
    run_scenario(four, d4);
    for (const auto& entry : fs::directory_iterator(d1)) {
        if (entry.path().extension() != ".csv") continue;
        if (entry.path().filename() == "manifest.csv") continue;  // records threads
        CHECK(slurp(entry.path()) == slurp(d4 / entry.path().filename()));
    }
}

TEST_CASE("kernel variants emit identical csv bytes") {
    const auto tables = kernels::available_tables();
    if (tables.size() < 2) return;  // nothing to compare on this machine

    RunConfig base = tiny_scenario_config("esn_diagonal");
    base.set("n_reservoir", "30");
    base.set("zeta_grid", "2,5");

    RunConfig scalar = base;
    scalar.set("simd", "scalar");
    const fs::path ds = fresh_dir("simd_scalar");
    run_scenario(scalar, ds);

    for (size_t i = 1; i < tables.size(); ++i) {
        RunConfig wide = base;
        wide.set("simd", tables[i]->name);
        const fs::path dw = fresh_dir(std::string("simd_") + tables[i]->name);
        run_scenario(wide, dw);
        for (const auto& entry : fs::directory_iterator(ds)) {
            if (entry.path().extension() != ".csv") continue;
            if (entry.path().filename() == "manifest.csv") continue;
            CHECK(slurp(entry.path()) == slurp(dw / entry.path().filename()));
        }
    }
    kernels::set_active_table("auto");
}

TEST_SUITE_END();
