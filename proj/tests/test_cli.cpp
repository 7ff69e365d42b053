#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "config.hpp"
#include "rdlab/errors.hpp"
#include "scenarios.hpp"

using namespace rdlab;
using namespace rdlab::cli;
namespace fs = std::filesystem;

namespace {

std::string error_of(const std::string& text) {
    try {
        build_plan(parse_config(text, "t.toml"));
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("rdlab_test_" + name);
    fs::remove_all(p);
    return p;
}

const char* kSmall = R"cfg(
[run]
note = "small"

[scenario.roots]
kind = "LongtimeLimit"
G = "poly(0, -2, 3, -1)"

[scenario.stationary]
kind = "StationaryResiduals"
witnesses = ["ex2(1)"]
n = 201

[scenario.vinf]
kind = "VInfinityCurve"
G = "power(1, 2)"
times = [0.5, 1]
)cfg";

}  // namespace

TEST_CASE("config parser reports the line") {
    CHECK(error_of("[scenario.a]\nkind = \"LongtimeLimit\"\nG\n").find("t.toml:3") != std::string::npos);
    CHECK(error_of("[widget.a]\n").find("unknown table kind") != std::string::npos);
    CHECK(error_of("[scenario.a]\nkind = \"LongtimeLimit\"\n[scenario.a]\n").find("duplicate table") !=
          std::string::npos);
    CHECK(error_of("[scenario.a]\nkind = 1\nkind = 2\n").find("duplicate key") != std::string::npos);
    CHECK(error_of("x = 1\n").find("outside") != std::string::npos);
    CHECK(error_of("[scenario.a]\nkind = \"oops\n").find("quotes") != std::string::npos);
}

TEST_CASE("scenario validation names the offending key") {
    CHECK(error_of("[scenario.a]\nkind = \"Teleport\"\n").find("scenario.a.kind") != std::string::npos);
    CHECK(error_of("[scenario.a]\nkind = \"LongtimeLimit\"\nG = \"power(1,2)\"\ncolour = 3\n")
              .find("scenario.a.colour") != std::string::npos);
    CHECK(error_of("[scenario.a]\nkind = \"LongtimeLimit\"\n").find("scenario.a.G") != std::string::npos);
    CHECK(error_of("[scenario.a]\nkind = \"ClassifyTerm\"\nterm = \"nope\"\n").find("nope") != std::string::npos);
    CHECK(error_of("[scenario.a]\nkind = \"LongtimeLimit\"\nG = \"wobble(2)\"\n").find("wobble") !=
          std::string::npos);
    CHECK(error_of("[term.minus_u2]\nkind = \"power\"\np = 2\n").find("shadows") != std::string::npos);
}

TEST_CASE("config terms and operators join the catalog") {
    Plan p = build_plan(parse_config(
        "[term.quartic]\nkind = \"power\"\np = 4\n[operator.wide]\na = \"weight(1, 1)\"\n"
        "[scenario.c]\nkind = \"ClassifyTerm\"\nterm = \"quartic\"\n",
        "t.toml"));
    CHECK(p.catalog.term("quartic")(0.0, 2.0) == doctest::Approx(-16.0));
    CHECK(p.catalog.op("wide").a(1.0) == doctest::Approx(2.0));
    CHECK(p.scenarios.size() == 1);
}

TEST_CASE("rate expressions") {
    Catalog cat = build_plan(parse_config("", "t.toml")).catalog;
    CHECK(parse_rate("poly(1, -1)", cat)(3.0) == doctest::Approx(-2.0));
    CHECK(parse_rate("power(2, 3)", cat)(2.0) == doctest::Approx(-16.0));
    CHECK(parse_rate("term(minus_u2)", cat)(3.0) == doctest::Approx(-9.0));
    CHECK_THROWS_AS(parse_rate("power(2)", cat), ConfigError);
    auto [name, args] = parse_call("ex1(1, 0.5)", "w");
    CHECK(name == "ex1");
    CHECK(args == std::vector<double>{1.0, 0.5});
}

TEST_CASE("describe is pure and lists artifacts") {
    Plan p = build_plan(parse_config(kSmall, "small.toml"));
    std::string a = describe_table(p), b = describe_table(build_plan(parse_config(kSmall, "small.toml")));
    CHECK(a == b);
    CHECK(a.find("vinf.csv") != std::string::npos);
    CHECK(list_table(p).find("LongtimeLimit") != std::string::npos);
}

TEST_CASE("shipped example set covers every scenario kind") {
    Plan p = build_plan(load_config(RDLAB_CONFIG_DIR "/all_scenarios.toml"));
    CHECK(p.scenarios.size() >= 8);
    std::set<ScenarioKind> kinds;
    for (const auto& s : p.scenarios) kinds.insert(s.kind);
    CHECK(kinds.size() == 10);
    for (const char* f : {"empty.toml", "thm1_certificate.toml", "example2_nonuniqueness.toml"})
        CHECK_NOTHROW(build_plan(load_config(std::string(RDLAB_CONFIG_DIR "/") + f)));
}

TEST_CASE("empty config runs to an empty manifest") {
    fs::path out = scratch("empty");
    std::ostringstream log;
    RunOptions o;
    o.out_dir = out.string();
    CHECK(run_plan(build_plan(parse_config("# nothing\n", "empty.toml")), o, log) == 0);
    CHECK(slurp(out / "manifest.json").find("\"scenarios\": []") != std::string::npos);
}

TEST_CASE("manifest lists every artifact and runs are byte-identical") {
    Plan p = build_plan(parse_config(kSmall, "small.toml"));
    fs::path a = scratch("det_a"), b = scratch("det_b");
    std::ostringstream log;
    RunOptions o;
    o.out_dir = a.string();
    o.jobs = 1;
    std::vector<ScenarioResult> res;
    REQUIRE(run_plan(p, o, log, &res) == 0);
    o.out_dir = b.string();
    o.jobs = 3;
    REQUIRE(run_plan(p, o, log) == 0);
    const std::string manifest = slurp(a / "manifest.json");
    CHECK(manifest == slurp(b / "manifest.json"));
    int files = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        auto rel = fs::relative(e.path(), a).string();
        if (rel == "manifest.json" || rel == "timing.json") continue;
        ++files;
        CHECK_MESSAGE(manifest.find("\"" + rel + "\"") != std::string::npos, rel);
        CHECK_MESSAGE(manifest.find(sha256_hex(slurp(e.path()))) != std::string::npos, rel);
        CHECK(slurp(e.path()) == slurp(b / rel));
    }
    CHECK(files == 4);
    CHECK(manifest.find("seconds") == std::string::npos);
    CHECK(manifest.find("\"note\": \"small\"") != std::string::npos);
    for (const auto& r : res) CHECK(r.status == Status::Passed);
}

TEST_CASE("filter and strict handling") {
    const char* text = R"cfg(
[scenario.ok]
kind = "LongtimeLimit"
G = "power(1, 2)"

[scenario.wrong]
kind = "OsgoodDichotomy"
G = "power(1, 2)"
expect = "Divergent"
)cfg";
    Plan p = build_plan(parse_config(text, "f.toml"));
    std::ostringstream log;
    RunOptions o;
    o.out_dir = scratch("filter").string();
    o.filter = "ok";
    std::vector<ScenarioResult> res;
    CHECK(run_plan(p, o, log, &res) == 0);
    CHECK(res.size() == 1);
    o.filter = "*";
    CHECK(run_plan(p, o, log, &res) == 1);
    CHECK(log.str().find("[wrong] failed") != std::string::npos);
}

TEST_CASE("sha256 of a known string") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
