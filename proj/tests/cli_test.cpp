#include "abtrace/cli.hpp"

#include <doctest.h>

#include <cmath>

using namespace abtrace;
using namespace abtrace::cli;

TEST_CASE("angle parsing") {
    CHECK(parse_angle("0.7") == 0.7);
    CHECK(parse_angle("pi") == kPi);
    CHECK(parse_angle("-pi/4") == -kPi / 4);
    CHECK(parse_angle("2pi/3") == 2 * kPi / 3);
    CHECK(parse_angle("0.5pi") == 0.5 * kPi);
    CHECK(parse_angle("1e-3") == 1e-3);
    CHECK(parse_angle(" 3 ") == 3.0);
    CHECK(parse_angle("1/2") == 0.5);
    for (const char* bad : {"", "pie", "pi/0", "/3", "abc", "--1"}) CHECK_THROWS_AS(parse_angle(bad), ConfigError);
}

TEST_CASE("alpha lists") {
    const auto sweep = parse_alpha_list("sweep");
    REQUIRE(sweep.size() == 6);
    CHECK(sweep[0] == 0.0);
    CHECK(sweep[5] == kPi);
    CHECK(parse_alpha_list("0,pi/2") == std::vector<double>{0.0, kPi / 2});
    CHECK_THROWS_AS(parse_alpha_list(""), ConfigError);
}

TEST_CASE("defaults validate and survive a JSON round trip") {
    ExperimentConfig c;
    CHECK_NOTHROW(c.validate());
    const auto back = ExperimentConfig::from_json(c.full_json());
    CHECK(back.full_json() == c.full_json());
    CHECK(config_hash(back) == config_hash(c));
}

TEST_CASE("config JSON accepts numbers, strings and arrays for alpha") {
    using nlohmann::json;
    CHECK(ExperimentConfig::from_json(json{{"alpha", 0.5}}).alpha == std::vector<double>{0.5});
    CHECK(ExperimentConfig::from_json(json{{"alpha", "pi/2"}}).alpha == std::vector<double>{kPi / 2});
    CHECK(ExperimentConfig::from_json(json{{"alpha", json::array({0, "pi"})}}).alpha == std::vector<double>{0.0, kPi});
    const auto c = ExperimentConfig::from_json(json::parse(
        R"({"problem":"torus","lattice":{"e1":[1,0],"e2":[0,1]},"torus_vectors":[[1,0],[0,1]],"fit":{"half_width":0.2}})"));
    CHECK(c.problem == "torus");
    CHECK(c.e2 == Vec2(0.0, 1.0));
    CHECK(c.torus_vectors.size() == 2);
    CHECK(c.fit_half_width == 0.2);
}

TEST_CASE("config errors") {
    using nlohmann::json;
    CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"radius_typo", 1.0}}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"fit", {{"width", 0.1}}}}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"radius", "big"}}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"alpha", true}}), ConfigError);

    auto expect_invalid = [](auto mutate) {
        ExperimentConfig c;
        mutate(c);
        CHECK_THROWS_AS(c.validate(), ConfigError);
    };
    expect_invalid([](ExperimentConfig& c) { c.problem = "sphere"; });
    expect_invalid([](ExperimentConfig& c) { c.radius = -1.0; });
    expect_invalid([](ExperimentConfig& c) { c.problem = "annulus"; c.inner_radius = 1.5; });
    expect_invalid([](ExperimentConfig& c) { c.cutoff = 0.0; });
    expect_invalid([](ExperimentConfig& c) { c.cutoff = 500.0; });
    expect_invalid([](ExperimentConfig& c) { c.ngon = 1; });
    expect_invalid([](ExperimentConfig& c) { c.fit_half_width = 0.5; });
    expect_invalid([](ExperimentConfig& c) { c.e2 = Vec2(2.0, 0.0); });
    expect_invalid([](ExperimentConfig& c) { c.threads = 0; });
    expect_invalid([](ExperimentConfig& c) { c.torus_vectors = {{0, 0}}; });
    expect_invalid([](ExperimentConfig& c) { c.alpha = {}; });
}

TEST_CASE("config hash ignores output location and threads") {
    ExperimentConfig a, b;
    b.out = "elsewhere";
    b.threads = 8;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.cutoff = 81.0;
    CHECK(config_hash(a) != config_hash(b));
}
