#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "detproj/csv.hpp"
#include "detproj/pipelines.hpp"

using namespace detproj;
using harness::ConfigSchema;
using harness::KeyType;
using harness::RunConfig;

namespace {

ConfigSchema demo_schema() {
    ConfigSchema s;
    s.add("nu", KeyType::Double, "0.1", "viscosity")
        .add("M", KeyType::Int, "64", "grid")
        .add("seed", KeyType::Uint64, "0", "rng seed")
        .add("kind", KeyType::String, "taylor_green", "initial data");
    return s;
}

}  // namespace

TEST_CASE("config parsing: values, defaults, comments") {
    auto schema = demo_schema();
    auto cfg = RunConfig::parse("# run setup\nnu = 0.25\nkind = random # trailing note\n", schema);
    CHECK(cfg.get_double("nu") == 0.25);
    CHECK(cfg.get_string("kind") == "random");
    CHECK(cfg.get_int("M") == 64);  // default
    CHECK(cfg.was_set("nu"));
    CHECK_FALSE(cfg.was_set("M"));

    auto empty = RunConfig::parse("", schema);
    CHECK(empty.get_double("nu") == 0.1);
    auto resolved = empty.resolved();
    REQUIRE(resolved.size() == 4);
    CHECK(resolved[0].first == "nu");
    CHECK(resolved[0].second == "0.1");
}

TEST_CASE("config parsing rejects unknown, duplicate, and malformed keys") {
    auto schema = demo_schema();
    CHECK_THROWS_WITH(RunConfig::parse("nuu = 0.1\n", schema),
                      Catch::Matchers::ContainsSubstring("unknown key 'nuu'") &&
                          Catch::Matchers::ContainsSubstring("line 1"));
    CHECK_THROWS_WITH(RunConfig::parse("nu = 0.1\nnu = 0.2\n", schema),
                      Catch::Matchers::ContainsSubstring("duplicate key 'nu'") &&
                          Catch::Matchers::ContainsSubstring("line 2"));
    CHECK_THROWS_WITH(RunConfig::parse("nu 0.1\n", schema),
                      Catch::Matchers::ContainsSubstring("malformed line 1"));
    CHECK_THROWS_WITH(RunConfig::parse("nu = abc\n", schema),
                      Catch::Matchers::ContainsSubstring("bad value for key 'nu'"));
    CHECK_THROWS_WITH(RunConfig::parse("M = 1.5\n", schema),
                      Catch::Matchers::ContainsSubstring("bad value for key 'M'"));
    CHECK_THROWS_WITH(RunConfig::parse("seed = -3\n", schema),
                      Catch::Matchers::ContainsSubstring("bad value for key 'seed'"));
}

TEST_CASE("config hash tracks the resolved values") {
    auto schema = demo_schema();
    auto a = RunConfig::parse("nu = 0.25\n", schema);
    auto b = RunConfig::parse("nu = 0.25\n", schema);
    auto c = RunConfig::parse("nu = 0.5\n", schema);
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() != c.hash());
    // defaults participate: an empty config hashes like its expansion
    auto d = RunConfig::parse("", schema);
    auto e = RunConfig::parse("nu = 0.1\nM = 64\nseed = 0\nkind = taylor_green\n", schema);
    CHECK(d.hash() == e.hash());
}

TEST_CASE("csv writer emits provenance and byte-stable numbers") {
    auto schema = demo_schema();
    auto cfg = RunConfig::parse("nu = 0.25\n", schema);
    auto path = std::filesystem::temp_directory_path() / "detproj_test.csv";
    for (int pass = 0; pass < 2; ++pass) {
        harness::CsvWriter csv(path.string());
        csv.provenance(cfg, 42);
        csv.columns({"t", "value"});
        csv.row(std::vector<double>{0.1, 1.0 / 3.0});
        csv.row({"label", harness::csv_num(2.5)});
    }
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    CHECK(text.find("# detproj 0.1.0") != std::string::npos);
    CHECK(text.find("# seed: 42") != std::string::npos);
    CHECK(text.find("# config-hash: ") != std::string::npos);
    CHECK(text.find("# nu = 0.25") != std::string::npos);
    CHECK(text.find("0.33333333333333331") != std::string::npos);  // %.17g round-trip

    auto table = harness::read_csv_file(path.string());
    CHECK(table.columns == std::vector<std::string>{"t", "value"});
    REQUIRE(table.rows.size() == 2);
    auto vals = table.column_as_double("value");
    CHECK(vals[0] == 1.0 / 3.0);
    CHECK(vals[1] == 2.5);
    std::filesystem::remove(path);
}

TEST_CASE("unknown pipeline names are usage errors") {
    CHECK_THROWS_AS(pipelines::run_pipeline("no-such-pipeline", "/tmp"),
                    std::invalid_argument);
    CHECK(pipelines::pipeline_names().size() == 6);
}
