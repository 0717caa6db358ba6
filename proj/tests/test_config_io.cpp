#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <doctest.h>

#include "commands.hpp"
#include "config.hpp"
#include "io.hpp"

using namespace fpuwave;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("fpuwave_test_" + name);
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("model specs") {
    const auto p = ModelSpec::parse("power:2:2");
    CHECK(p.name == "power");
    CHECK(p.m == 2);
    CHECK(p.c == std::vector<double>{2.0});
    CHECK(p.build().force(1.0) == doctest::Approx(3 * std::exp(1.0)));
    const auto q = ModelSpec::parse("power:3:0.5,1");
    CHECK(q.c == std::vector<double>{0.5, 1.0});
    CHECK(ModelSpec::parse("power:1").c.empty());
    CHECK(ModelSpec::parse("power").m == 2);
    CHECK(ModelSpec::parse("toda").build().mu() == 0.0);
    for (const char* bad : {"bogus", "powerful", "power:", "power:x", "power:2:a", "power:2:-1", "power:0"}) {
        CHECK_THROWS_AS(ModelSpec::parse(bad), ConfigError);
    }
}

TEST_CASE("config parsing") {
    const auto c = RunConfig::from_text(R"({"model": "toda", "delta": 0.27, "L": 4, "k": 64})");
    REQUIRE(c.model.has_value());
    CHECK(c.model->name == "toda");
    CHECK(c.deltas == std::vector<double>{0.27});
    CHECK(c.L == 4);
    CHECK(c.k == 64);

    const auto o = RunConfig::from_text(R"({"model": {"name": "power", "m": 2, "c": [2]}, "deltas": [0.1, 0.2]})");
    CHECK(o.model->c == std::vector<double>{2.0});

    CHECK_THROWS_AS(RunConfig::from_text(R"({"model": "toda", "colour": 1})"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_text(R"({"emit": {"plots": true}})"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_text(R"({"delta": 0.1, "deltas": [0.2]})"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_text(R"({"deltas": []})"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_text(R"({"k": "many"})"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_text(R"({"model": {"m": 2}})"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_text("{not json"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_text("[1, 2]"), ConfigError);
    CHECK_NOTHROW(RunConfig::from_text(""));
    CHECK_NOTHROW(RunConfig::from_text(" \n"));
    CHECK_THROWS_AS(RunConfig::from_text(R"({"model": {"name": "power", "m": 2, "c": [-1]}})"), ConfigError);
}

TEST_CASE("config normalisation") {
    auto c = RunConfig::from_text(R"({"model": "toda", "deltas": [0.09, 0.27, 0.09, 0.18]})");
    c.output_dir = "out";
    c.normalise();
    CHECK(c.deltas == std::vector<double>{0.27, 0.18, 0.09});
    CHECK(c.warnings.size() == 1);

    for (const char* bad : {R"({"delta": 0.6})", R"({"delta": 0})", R"({"L": 2})", R"({"k": 0})",
                            R"({"tol": 0})", R"({"max_iter": 0})"}) {
        auto b = RunConfig::from_text(bad);
        CHECK_THROWS_AS(b.normalise(), ConfigError);
    }

    RunConfig none;
    none.normalise();
    CHECK_THROWS_AS(none.require_model(), ConfigError);
    none.model = ModelSpec::parse("toda");
    CHECK_THROWS_AS(none.require_model(), ConfigError);
    none.deltas = {0.2};
    CHECK_NOTHROW(none.require_model());
}

TEST_CASE("output directory from the environment") {
    ::setenv(kOutputDirEnv, "/tmp/from-env", 1);
    RunConfig c;
    c.normalise();
    CHECK(c.output_dir == "/tmp/from-env");
    RunConfig d;
    d.output_dir = "explicit";
    d.normalise();
    CHECK(d.output_dir == "explicit");
    ::unsetenv(kOutputDirEnv);
    RunConfig e;
    e.normalise();
    CHECK_FALSE(e.output_dir.empty());
}

TEST_CASE("config round trip") {
    auto c = RunConfig::from_text(
        R"({"model": "power:3:1,0.5", "deltas": [0.2, 0.1], "k": 32, "tol": 1e-11, "emit": {"scaled": true}})");
    c.output_dir = "x";
    c.normalise();
    auto back = RunConfig::from_json(c.to_json());
    back.normalise();
    CHECK(back.to_json() == c.to_json());
}

TEST_CASE("number formatting round-trips") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(0.27) == "0.27");
    CHECK(format_number(-2.0) == "-2");
    CHECK(format_number(NAN) == "nan");
    CHECK(format_number(INFINITY) == "inf");
    CHECK(format_number(-INFINITY) == "-inf");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-30, 30);
    for (int i = 0; i < 1000; ++i) {
        const double v = std::exp(u(rng)) * (i % 2 ? -1 : 1);
        CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(delta_tag(0.27) == "0.27");
    CHECK(delta_tag(0.03) == "0.03");
}

TEST_CASE("csv writers") {
    const auto dir = scratch("csv");
    const std::vector<double> a{1.0, 0.5}, b{2.0, 0.25}, shortcol{1.0};
    write_csv(dir / "nested" / "t.csv", {{"a", a}, {"b", b}});
    CHECK(slurp(dir / "nested" / "t.csv") == "a,b\n1,2\n0.5,0.25\n");
    CHECK_THROWS_AS(write_csv(dir / "u.csv", {{"a", a}, {"b", shortcol}}), InvalidArgument);

    const auto g = PeriodicGrid::make(3, 2);
    write_profile_csv(dir / "p.csv", indicator_profile(g));
    const auto text = slurp(dir / "p.csv");
    CHECK(text.rfind("x,value\n-2.875,0\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(g.size()) + 1);

    const auto cols = sweep_csv_columns();
    CHECK(cols.front() == "delta");
    CHECK(cols.size() == 38);
}

TEST_CASE("commands write deterministic outputs") {
    RunConfig c = RunConfig::from_text(R"({"model": "power:2:2", "delta": 0.18, "k": 32, "emit": {"scaled": true}})");
    c.output_dir = scratch("solve_a").string();
    const auto r1 = cmd_solve(c);
    CHECK(r1.outcome == Outcome::ok);
    CHECK(r1.report["status"] == "converged");
    c.output_dir = scratch("solve_b").string();
    cmd_solve(c);
    for (const char* f : {"V.csv", "R.csv", "tip.csv", "transition.csv", "foot.csv", "solution.json"}) {
        const auto a = slurp(fs::path(scratch("x").parent_path() / "fpuwave_test_solve_a" / f));
        CHECK_FALSE(a.empty());
        if (std::string(f) != "solution.json") {
            CHECK(a == slurp(fs::path(c.output_dir) / f));
        }
    }
    const auto j = nlohmann::json::parse(slurp(fs::path(c.output_dir) / "solution.json"));
    CHECK(j["config"]["k"] == 32);
    CHECK(j["solution"]["residual_inf"].get<double>() <= 1e-10);
}

TEST_CASE("solve reports non-convergence as a numerical failure") {
    RunConfig c = RunConfig::from_text(R"({"model": "toda", "delta": 0.1, "k": 16, "max_iter": 2})");
    c.output_dir = scratch("fail").string();
    const auto r = cmd_solve(c);
    CHECK(r.outcome == Outcome::numerical_failure);
    const auto j = nlohmann::json::parse(slurp(fs::path(c.output_dir) / "solution.json"));
    CHECK(j["status"] == "not_converged");
    CHECK_FALSE(fs::exists(fs::path(c.output_dir) / "V.csv"));

    RunConfig two = RunConfig::from_text(R"({"model": "toda", "deltas": [0.1, 0.2]})");
    two.output_dir = scratch("two").string();
    CHECK_THROWS_AS(cmd_solve(two), ConfigError);
}

TEST_CASE("sweep command") {
    RunConfig c = RunConfig::from_text(R"({"model": "power:2:2", "k": 32})");
    c.output_dir = scratch("sweep").string();
    const auto r = cmd_sweep(c);
    CHECK(r.outcome == Outcome::ok);
    const fs::path out = c.output_dir;
    const auto j = nlohmann::json::parse(slurp(out / "sweep.json"));
    CHECK(j["sweep"]["rows"].size() == 6);
    CHECK(j["sweep"]["fits"].size() >= 4);
    const auto csv = slurp(out / "sweep.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    CHECK(fs::exists(out / "profiles" / "V_0.03.csv"));
}
