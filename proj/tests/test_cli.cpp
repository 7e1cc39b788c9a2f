#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pidfit/commands.hpp"
#include "pidfit/errors.hpp"
#include "pidfit/svg.hpp"

using namespace pidfit;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    fs::path d = fs::temp_directory_path() / "pidfit_cli_test";
    fs::create_directories(d);
    return d;
}

fs::path write_file(const std::string& name, const std::string& content) {
    fs::path p = scratch_dir() / name;
    std::ofstream(p) << content;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kTable2Config = R"({
  "plant": {"num": [1], "den": [1, 1], "delay": 1},
  "target": {"kind": "fotd", "Tcl": 2, "L": 1},
  "controller": {"hi": ["inf", "inf", 0]},
  "simulation": {"t_final": 25, "n_samples": 2000}
})";

int run_cli(const std::string& args) {
    const int rc = std::system((std::string(PIDFIT_BIN) + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("parse_config fills defaults") {
    fs::path cfg = write_file("minimal.json", R"({
      "plant": {"num": [1], "den": [1, 3, 3, 1]},
      "target": {"kind": "second_order", "PO": 0, "Ts": 10}
    })");
    RunConfig c = parse_config(cfg.string());
    CHECK(c.max_evals == 3000);
    CHECK(c.n_samples == 2000);
    CHECK(c.tol == 1e-8);
    CHECK(c.horizon() == doctest::Approx(40.0));
    CHECK(c.hi.kp == TuneProblem::kUnbounded);
}

TEST_CASE("parse_config rejects bad input with key paths") {
    fs::path unknown = write_file("unknown.json", R"({
      "plant": {"num": [1], "den": [1, 1], "delai": 0},
      "target": {"kind": "fotd", "Tcl": 2}
    })");
    CHECK_THROWS_WITH_AS(parse_config(unknown.string()),
                         doctest::Contains("plant.delai"), ConfigError);

    fs::path neg = write_file("neg_delay.json", R"({
      "plant": {"num": [1], "den": [1, 1], "delay": -1},
      "target": {"kind": "fotd", "Tcl": 2}
    })");
    CHECK_THROWS_WITH_AS(parse_config(neg.string()), doctest::Contains("plant.delay"),
                         ConfigError);

    CHECK_THROWS_AS(parse_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("parse_config accepts the delayed PI setup") {
    fs::path cfg = write_file("table2.json", kTable2Config);
    RunConfig c = parse_config(cfg.string());
    CHECK(c.plant.delay == 1.0);
    CHECK(c.target.kind == TargetKind::fotd);
    CHECK(c.hi.kd == 0.0);
    CHECK(c.t_final.has_value());
}

TEST_CASE("report round-trips and CSV format is stable") {
    fs::path cfg = write_file("evalcase.json", R"({
      "plant": {"num": [1], "den": [1, 1]},
      "target": {"kind": "second_order", "PO": 0, "Ts": 1},
      "simulation": {"t_final": 10, "n_samples": 500}
    })");
    RunConfig c = parse_config(cfg.string());
    fs::path out = scratch_dir() / "evalcase_out";
    const int rc = cmd_evaluate(c, {11.0, 36.0, 0.0}, out.string());
    CHECK(rc == kExitOk);

    const std::string report = slurp(out / "report.json");
    auto j = nlohmann::json::parse(report);
    CHECK(j.dump(2) + "\n" == report);
    CHECK(j["metrics"]["po_pct"].get<double>() == doctest::Approx(9.23).epsilon(0.06));
    CHECK(j["config"]["optimizer"]["max_evals"] == 3000);

    std::ifstream csv(out / "response.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,y_desired,y_actual");
    int rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    CHECK(rows == 500);
}

TEST_CASE("svg output is deterministic") {
    TimeSeries a;
    a.grid = SimGrid(1.0, 11);
    a.values = {0, .1, .2, .3, .4, .5, .6, .7, .8, .9, 1.0};
    TimeSeries b = a;

    const std::string s1 = render_svg({a, b}, {"one", "two"});
    const std::string s2 = render_svg({a, b}, {"one", "two"});
    CHECK(s1 == s2);
    CHECK(s1.find("<polyline") != std::string::npos);
    CHECK(s1.find("two") != std::string::npos);

    const std::string single = render_svg({a}, {"only"});
    CHECK(single.find("only") != std::string::npos);
    CHECK_THROWS_AS(render_svg({}, {}), ConfigError);
}

TEST_CASE("compare skips inapplicable methods but still succeeds") {
    fs::path cfg = write_file("highorder.json", R"({
      "plant": {"num": [1], "den": [1, 3, 3, 1]},
      "target": {"kind": "second_order", "PO": 0, "Ts": 10},
      "optimizer": {"max_evals": 300},
      "simulation": {"n_samples": 600}
    })");
    RunConfig c = parse_config(cfg.string());
    fs::path out = scratch_dir() / "cmp_out";
    const int rc = cmd_compare(c, {"lambda", "zn-ultimate"}, out.string());
    CHECK(rc == kExitOk);

    auto j = nlohmann::json::parse(slurp(out / "table.json"));
    REQUIRE(j["rows"].size() == 2);
    CHECK(j["rows"][0]["skipped"] == true);
    CHECK(j["rows"][0]["reason"].get<std::string>().find("first-order") != std::string::npos);
    CHECK(j["rows"][1]["skipped"] == false);
}

TEST_CASE("cli exit codes") {
    fs::path good = write_file("cli_good.json", R"({
      "plant": {"num": [1], "den": [1, 1]},
      "target": {"kind": "second_order", "PO": 0, "Ts": 2},
      "simulation": {"t_final": 10, "n_samples": 400},
      "optimizer": {"max_evals": 250}
    })");
    fs::path bad = write_file("cli_bad.json", R"({"plant": {}})");
    fs::path out = scratch_dir() / "cli_out";

    CHECK(run_cli("simulate --config " + good.string() + " --out " + out.string()) == 0);
    CHECK(run_cli("tune --config " + bad.string() + " --out " + out.string()) == 3);
    CHECK(run_cli("tune --config /no/such/file --out " + out.string()) == 3);

    // forcing a huge pure gain on the triple lag exceeds Ku = 8: unstable
    fs::path unstable = write_file("cli_unstable.json", R"({
      "plant": {"num": [1], "den": [1, 3, 3, 1]},
      "target": {"kind": "second_order", "PO": 0, "Ts": 10},
      "controller": {"lo": [50, 0, 0], "hi": [50, 0, 0]},
      "optimizer": {"max_evals": 50},
      "simulation": {"t_final": 40, "n_samples": 500}
    })");
    CHECK(run_cli("tune --config " + unstable.string() + " --out " + out.string()) == 2);

    // trajectory shorter than the horizon: config error
    fs::path traj = write_file("cli_traj.json", R"({
      "plant": {"num": [1], "den": [1, 1]},
      "target": {"kind": "trajectory", "t_final": 2, "values": [0, 0.5, 0.75, 0.9, 1.0]},
      "simulation": {"t_final": 10, "n_samples": 400}
    })");
    CHECK(run_cli("tune --config " + traj.string() + " --out " + out.string()) == 3);
}
