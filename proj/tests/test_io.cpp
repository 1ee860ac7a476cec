#include <cstdio>
#include <string>

#include "doctest.h"
#include "ugc/io.hpp"

using namespace ugc;

TEST_CASE("parse_config_json: valid documents") {
  SUBCASE("full information") {
    const auto cfg = io::parse_config_json(
        R"({"mechanism":"M3","N":3,"R":4,"c":1,"types":[0.9247,0.3421,0.3095]})");
    CHECK(cfg.mechanism == Mechanism::M3);
    CHECK(cfg.n_users == 3);
    CHECK(cfg.reward == 4.0);
    CHECK(cfg.types == std::vector<double>{0.9247, 0.3421, 0.3095});
  }
  SUBCASE("minimal M4") {
    const auto cfg =
        io::parse_config_json(R"({"mechanism":"M4","N":2,"R":2,"c":1,"types":[1.0,1.0]})");
    CHECK(cfg.mechanism == Mechanism::M4);
  }
  SUBCASE("uniform distribution") {
    const auto cfg = io::parse_config_json(
        R"({"mechanism":"M6","N":11,"K":5,"R":8,"c":1,"distribution":{"kind":"uniform"}})");
    REQUIRE(cfg.distribution.has_value());
    CHECK(cfg.distribution->kind() == TypeDistribution::Kind::Uniform);
  }
  SUBCASE("piecewise distribution") {
    const auto cfg = io::parse_config_json(
        R"({"mechanism":"M5","N":4,"K":2,"R":5,"c":1,)"
        R"("distribution":{"kind":"piecewise","knots":[[0,0],[0.5,0.7],[1,1]]}})");
    REQUIRE(cfg.distribution.has_value());
    CHECK(cfg.distribution->cdf(0.5) == doctest::Approx(0.7));
  }
  SUBCASE("unsorted types with the sort flag") {
    const auto cfg = io::parse_config_json(
        R"({"mechanism":"M3","N":3,"R":4,"c":1,"types":[0.2,0.9,0.5],"sort":true})");
    CHECK(cfg.types == std::vector<double>{0.9, 0.5, 0.2});
  }
}

TEST_CASE("parse_config_json: rejections") {
  CHECK_THROWS_AS(io::parse_config_json("not json"), ConfigError);
  CHECK_THROWS_AS(io::parse_config_json(R"({"mechanism":"M9","N":1,"R":1,"c":1})"), ConfigError);
  CHECK_THROWS_AS(io::parse_config_json(R"({"mechanism":"M3","N":2,"R":4,"c":1})"), ConfigError);
  // a zero type is rejected: the cost rate is undefined there
  CHECK_THROWS_AS(
      io::parse_config_json(R"({"mechanism":"M3","N":2,"R":4,"c":1,"types":[0.5,0.0]})"),
      ConfigError);
  CHECK_THROWS_AS(
      io::parse_config_json(R"({"mechanism":"M3","N":3,"R":4,"c":1,"types":[0.2,0.9,0.5]})"),
      ConfigError);
  CHECK_THROWS_AS(
      io::parse_config_json(R"({"mechanism":"M1","N":2,"R":4,"c":1,"types":[0.9,0.5]})"),
      ConfigError);  // missing K
  CHECK_THROWS_AS(
      io::parse_config_json(R"({"mechanism":"M5","N":2,"K":1,"R":4,"c":1})"),
      ConfigError);  // missing distribution
}

TEST_CASE("round trips through serialization") {
  const auto cfg = io::parse_config_json(
      R"({"mechanism":"M3","N":3,"R":4,"c":1,"types":[0.9247,0.3421,0.3095]})");
  const auto out = fullinfo::solve_m3(cfg);
  const std::string json = io::outcome_to_json(cfg, out);
  CHECK(json.find("\"verdict\": \"multiple\"") != std::string::npos);

  const std::string path = "io_test_outcome.json";
  io::write_file(path, json);
  const auto profiles = io::parse_profiles_file(path);
  REQUIRE(profiles.size() == out.profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i)
    CHECK(profiles[i].actions == out.profiles[i].actions);
  std::remove(path.c_str());
}

TEST_CASE("strategy serialization round trip") {
  const auto cfg = io::parse_config_json(
      R"({"mechanism":"M6","N":11,"K":5,"R":8,"c":1,"distribution":{"kind":"uniform"}})");
  const auto strat = partialinfo::calibrate_beta(cfg, *cfg.distribution, 1024);
  const std::string path = "io_test_strategy.json";
  io::write_file(path, io::strategy_to_json(cfg, strat));
  const auto loaded = io::parse_strategy_file(path);
  CHECK(loaded.segments().size() == strat.segments().size());
  for (double x : {0.1, 0.5, 0.75, 0.95})
    CHECK(loaded.value(x) == doctest::Approx(strat.value(x)).epsilon(1e-6));
  std::remove(path.c_str());
}

TEST_CASE("curve CSV carries every segment kind") {
  const auto cfg = io::parse_config_json(
      R"({"mechanism":"M6","N":11,"K":5,"R":8,"c":1,"distribution":{"kind":"uniform"}})");
  const auto strat = partialinfo::calibrate_beta(cfg, *cfg.distribution, 1024);
  const std::string csv = io::strategy_to_csv(strat);
  CHECK(csv.rfind("x,beta_star,segment_kind\n", 0) == 0);
  CHECK(csv.find("original-beta") != std::string::npos);
  CHECK(csv.find(",diagonal") != std::string::npos);
  CHECK(csv.find("shifted-beta") != std::string::npos);
}

TEST_CASE("SVG rendering") {
  const auto cfg = io::parse_config_json(
      R"({"mechanism":"M6","N":2,"K":1,"R":2,"c":1,"distribution":{"kind":"uniform"}})");
  const auto strat = partialinfo::calibrate_beta(cfg, *cfg.distribution, 1024);
  const std::string svg = io::strategy_to_svg(strat);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);  // diagonal reference
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("original-beta") != std::string::npos);  // legend

  // the x^2 curve grid is monotone, convex, below the diagonal
  const auto& grid = strat.grid();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(grid[i][1] >= grid[i - 1][1]);
    CHECK(grid[i][1] <= grid[i][0] + 1e-9);
  }

  const auto empty = partialinfo::SymmetricStrategy::from_grid(
      {{0.0, 1.0, partialinfo::SegmentKind::OriginalBeta, 0.0}},
      {{0.0, 0.0}, {1.0, 0.5}}, false);
  CHECK_NOTHROW(io::strategy_to_svg(empty));
  CHECK_THROWS(partialinfo::SymmetricStrategy::from_grid(
      {{0.0, 1.0, partialinfo::SegmentKind::OriginalBeta, 0.0}}, {}, false));
}

TEST_CASE("trajectory CSV layout") {
  const std::vector<ActionProfile> traj = {ActionProfile{{1.0, 0.5}}, ActionProfile{{0.7, 0.4}}};
  const std::string csv = io::trajectory_to_csv(traj);
  CHECK(csv.rfind("iter,x1,x2\n", 0) == 0);
  CHECK(csv.find("\n0,1,0.5\n") != std::string::npos);
  CHECK(csv.find("\n1,0.7,0.4\n") != std::string::npos);
}

TEST_CASE("format_double is stable") {
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(1.0 / 3.0) == "0.3333333333333333");
}
