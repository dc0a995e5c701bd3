#include <catch2/catch_amalgamated.hpp>

#include <cstddef>
#include <string>
#include <vector>

#include "pmodlab/cli.hpp"

using namespace pmodlab;
using nlohmann::json;

namespace {

std::size_t column_index(const cli::Table& table, const std::string& name) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (table.columns[i] == name) return i;
    }
    throw std::out_of_range("no column named " + name);
}

json base_config() {
    return json::parse(R"({
        "space": {"n": 2, "p": 3},
        "map": {"kind": "identity"},
        "weight": {"kind": "constant", "value": 1.0},
        "ladder": [0.1, 0.05, 0.025, 0.0125]
    })");
}

}  // namespace

TEST_CASE("config validation points at the offending field", "[cli]") {
    CHECK_THROWS_AS(cli::parse_space(json::parse(R"({})")), cli::ConfigError);
    CHECK_THROWS_WITH(cli::parse_space(json::parse(R"({"space": {"n": 2}})")),
                      Catch::Matchers::ContainsSubstring("/space/p"));
    CHECK_THROWS_WITH(cli::parse_space(json::parse(R"({"space": {"n": 2, "p": 1.5}})")),
                      Catch::Matchers::ContainsSubstring("p"));
    json bad_map = base_config();
    bad_map["map"]["kind"] = "spiral";
    CHECK_THROWS_WITH(cli::parse_map(bad_map, SpaceParams(2, 3)),
                      Catch::Matchers::ContainsSubstring("/map/kind"));
    json bad_ladder = base_config();
    bad_ladder["ladder"] = json::parse("[0.1, 0.2, 0.3]");
    CHECK_THROWS_AS(cli::parse_ladder(bad_ladder), cli::ConfigError);
    json bad_weight = base_config();
    bad_weight["weight"] = json::parse(R"({"kind": "lebesgue"})");
    CHECK_THROWS_WITH(cli::parse_weight(bad_weight, SpaceParams(2, 3)),
                      Catch::Matchers::ContainsSubstring("/weight/kind"));
}

TEST_CASE("theorem3 map kind builds the counterexample profile", "[cli]") {
    json config = base_config();
    config["map"] = json::parse(R"({"kind": "theorem3", "alpha": 2.0, "eps": 0.1})");
    const RadialMap map = cli::parse_map(config, SpaceParams(2, 3));
    CHECK(map.profile().exponent() == 2.1);
}

TEST_CASE("constants command emits the chain as CSV and JSON", "[cli]") {
    const cli::CommandOutput out = cli::run_command("constants", "", base_config());
    REQUIRE(out.table.rows.size() == 1);
    const ConstantChain chain = constant_chain(SpaceParams(2, 3));
    CHECK(out.table.rows[0][column_index(out.table, "c")] == cli::format_double(chain.c));
    CHECK(out.table.rows[0][column_index(out.table, "c0")] == cli::format_double(chain.c0));
    CHECK(out.report.contains("derivation"));
    CHECK(out.report["config"] == base_config());
    CHECK(out.exit_code == 0);
    // header line present
    CHECK(out.table.to_csv().rfind("n,p,c,c1,c0\n", 0) == 0);
}

TEST_CASE("capacity command reproduces the triple-equality ring", "[cli]") {
    json config = base_config();
    config["ring"] = json::parse(R"({"r1": 1.0, "r2": 4.0})");
    const cli::CommandOutput out = cli::run_command("capacity", "", config);
    REQUIRE(out.table.rows.size() == 1);
    const auto& row = out.table.rows[0];
    const double lower = std::stod(row[column_index(out.table, "lower_mazya")]);
    const double exact = std::stod(row[column_index(out.table, "exact")]);
    const double upper = std::stod(row[column_index(out.table, "upper_lemma1")]);
    const double variational = std::stod(row[column_index(out.table, "variational")]);
    CHECK(lower == Catch::Approx(1.5707963268).epsilon(1e-9));
    CHECK(exact == Catch::Approx(lower).epsilon(1e-12));
    CHECK(upper == Catch::Approx(lower).epsilon(1e-12));
    CHECK(variational == Catch::Approx(lower).epsilon(1e-3));
}

TEST_CASE("verify thm1 passes and embeds the config", "[cli]") {
    const cli::CommandOutput out = cli::run_command("verify", "thm1", base_config());
    CHECK(out.exit_code == 0);
    CHECK(out.report["report"]["verdict"] == "pass");
    CHECK(out.report["config"] == base_config());
    const auto& row = out.table.rows.at(0);
    CHECK(row[column_index(out.table, "verdict")] == "pass");
}

TEST_CASE("verify thm1 fails with exit code 1 on a violating pair", "[cli]") {
    json config = base_config();
    config["weight"]["value"] = 1e-6;
    const cli::CommandOutput out = cli::run_command("verify", "thm1", config);
    CHECK(out.exit_code == 1);
    CHECK(out.report["report"]["verdict"] == "fail");
}

TEST_CASE("capacity command defaults to the unit weight", "[cli]") {
    json config = json::parse(R"({"space": {"n": 2, "p": 3}, "ring": {"r1": 1.0, "r2": 4.0},
                                  "grid_points": 256})");
    const cli::CommandOutput out = cli::run_command("capacity", "", config);
    const auto& row = out.table.rows.at(0);
    CHECK(std::stod(row[column_index(out.table, "upper_lemma1")]) ==
          Catch::Approx(1.5707963268).epsilon(1e-9));
}

TEST_CASE("distortion command falls back to the ladder radii", "[cli]") {
    json config = json::parse(R"({"space": {"n": 2, "p": 4},
                                  "map": {"kind": "power", "theta": 0.5},
                                  "ladder": [0.1, 0.05, 0.025]})");
    const cli::CommandOutput out = cli::run_command("distortion", "", config);
    CHECK(out.table.rows.size() == 3);
    json bad = config;
    bad["radii"] = json::parse("[0.5, 1.5]");
    CHECK_THROWS_AS(cli::run_command("distortion", "", bad), cli::ConfigError);
}

TEST_CASE("a not-applicable verdict exits zero", "[cli]") {
    json config = base_config();  // identity map: corollary 1 hypothesis fails
    const cli::CommandOutput out = cli::run_command("verify", "cor1", config);
    CHECK(out.exit_code == 0);
    CHECK(out.report["report"]["verdict"] == "not_applicable");
}

TEST_CASE("verify cor2/thm2/thm3 targets run end to end", "[cli]") {
    json cor2 = base_config();
    cor2["rescale"] = 0.5;
    CHECK(cli::run_command("verify", "cor2", cor2).exit_code == 0);

    json thm2 = base_config();
    thm2["alpha"] = 2.0;
    CHECK(cli::run_command("verify", "thm2", thm2).exit_code == 0);

    json thm3 = json::parse(R"({"space": {"n": 2, "p": 3}, "alpha": 2.0, "eps": 0.1})");
    const cli::CommandOutput out = cli::run_command("verify", "thm3", thm3);
    CHECK(out.exit_code == 0);
    CHECK(out.report["report"]["name"] == "theorem3");

    CHECK_THROWS_AS(cli::run_command("verify", "thm9", base_config()), cli::ConfigError);
    CHECK_THROWS_AS(cli::run_command("transmogrify", "", base_config()), cli::ConfigError);
}

TEST_CASE("sweep over theta reproduces the corollary-1 slope law", "[cli]") {
    json config = json::parse(R"({
        "space": {"n": 2, "p": 4},
        "map": {"kind": "power", "theta": 0.5},
        "ladder": [0.1, 0.05, 0.025, 0.0125],
        "sweep": {"param": "/map/theta", "values": [0.3, 0.5, 0.7],
                  "command": "verify", "target": "cor1"}
    })");
    const cli::CommandOutput out = cli::run_command("sweep", "", config);
    CHECK(out.exit_code == 0);
    REQUIRE(out.table.rows.size() == 3);
    const std::size_t slope_col = column_index(out.table, "ratio_slope");
    const std::vector<double> expected{-0.7, -0.5, -0.3};
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::stod(out.table.rows[i][slope_col]) ==
              Catch::Approx(expected[i]).margin(1e-6));
        CHECK(out.table.rows[i].back() == "ok");
    }
}

TEST_CASE("sweep over p keeps c0 at most 1", "[cli]") {
    json config = json::parse(R"({
        "space": {"n": 2, "p": 3},
        "sweep": {"param": "/space/p", "values": [2.5, 3, 4], "command": "constants"}
    })");
    const cli::CommandOutput out = cli::run_command("sweep", "", config);
    CHECK(out.exit_code == 0);
    REQUIRE(out.table.rows.size() == 3);
    const std::size_t c0_col = column_index(out.table, "c0");
    for (const auto& row : out.table.rows) {
        const double c0 = std::stod(row[c0_col]);
        CHECK(c0 > 0.0);
        CHECK(c0 <= 1.0);
    }
}

TEST_CASE("sweep over delta yields monotone partial integrals", "[cli]") {
    json config = json::parse(R"({
        "space": {"n": 2, "p": 3},
        "alpha": 2.0,
        "eps": 0.1,
        "annulus": {"eps0": 0.5, "delta": 1e-3},
        "sweep": {"param": "/annulus/delta",
                  "values": [1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8],
                  "command": "verify", "target": "thm3"}
    })");
    const cli::CommandOutput out = cli::run_command("sweep", "", config);
    CHECK(out.exit_code == 0);
    REQUIRE(out.table.rows.size() == 6);
    const std::size_t col = column_index(out.table, "alpha_partial_at_delta");
    double previous = 0.0;
    for (const auto& row : out.table.rows) {
        const double value = std::stod(row[col]);
        CHECK(value > previous);
        previous = value;
    }
}

TEST_CASE("a failing grid point is recorded without aborting the sweep", "[cli]") {
    json config = json::parse(R"({
        "space": {"n": 2, "p": 4},
        "map": {"kind": "power", "theta": 0.5},
        "ladder": [0.1, 0.05, 0.025, 0.0125],
        "sweep": {"param": "/map/theta", "values": [0.5, -1.0, 0.7],
                  "command": "verify", "target": "cor1"}
    })");
    const cli::CommandOutput out = cli::run_command("sweep", "", config);
    CHECK(out.exit_code == 1);  // the bad point marks the sweep as failed
    REQUIRE(out.table.rows.size() == 3);
    CHECK(out.table.rows[0].back() == "ok");
    CHECK(out.table.rows[1].back().rfind("error:", 0) == 0);
    CHECK(out.table.rows[2].back() == "ok");
}

TEST_CASE("a sweep axis must name an existing field", "[cli]") {
    json config = json::parse(R"({
        "space": {"n": 2, "p": 3},
        "sweep": {"param": "/space/q", "values": [3], "command": "constants"}
    })");
    CHECK_THROWS_WITH(cli::run_command("sweep", "", config),
                      Catch::Matchers::ContainsSubstring("/sweep/param"));
}

TEST_CASE("nested sweeps are rejected", "[cli]") {
    json config = json::parse(R"({
        "space": {"n": 2, "p": 3},
        "sweep": {"param": "/space/p", "values": [3], "command": "sweep"}
    })");
    CHECK_THROWS_AS(cli::run_command("sweep", "", config), cli::ConfigError);
}

TEST_CASE("re-running a command byte-reproduces its artifacts", "[cli]") {
    json thm3 = json::parse(R"({"space": {"n": 2, "p": 3}, "alpha": 2.0, "eps": 0.1})");
    const cli::CommandOutput a = cli::run_command("verify", "thm3", thm3);
    const cli::CommandOutput b = cli::run_command("verify", "thm3", thm3);
    CHECK(a.table.to_csv() == b.table.to_csv());
    CHECK(a.report.dump(2) == b.report.dump(2));
}

TEST_CASE("CSV fields with commas or quotes are escaped", "[cli]") {
    cli::Table table;
    table.columns = {"label"};
    table.rows.push_back({"error: bad, \"quoted\" value"});
    CHECK(table.to_csv() == "label\n\"error: bad, \"\"quoted\"\" value\"\n");
}

TEST_CASE("non-finite values render as inf/nan strings", "[cli]") {
    CHECK(cli::format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(cli::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(cli::format_double(std::nan("")) == "nan");
    CHECK(cli::json_number(std::numeric_limits<double>::infinity()) == json("inf"));
}
