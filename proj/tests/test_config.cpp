#include <string>
#include <vector>

#include "doctest.h"

#include "adcsim/config.hpp"
#include "support.hpp"

using namespace adcsim;
using nlohmann::json;

TEST_CASE("a minimal config fills in every default") {
  const ToolConfig config = parse_config(json::object());
  CHECK(config.adc.n_bits == 8);
  CHECK(config.adc.refs.vrefp == 1.0);
  CHECK(config.adc.refs.vrefn == -1.0);
  CHECK(config.adc.refs.vth == 0.0);
  CHECK(config.adc.sample_rate == 20e6);
  CHECK(config.adc.noise_sigma == 0.0);
  CHECK(config.adc.rng_seed == 0);
  REQUIRE(config.adc.stages.size() == 8);
  for (const StageParams& stage : config.adc.stages) {
    CHECK(stage.cap_ratio == 1.0);
    CHECK(!stage.dc_gain.has_value());
    CHECK(stage.comparator_offset == 0.0);
    CHECK(stage.rail_low == -5.0);
    CHECK(stage.rail_high == 5.0);
  }
  CHECK(config.fft.n_fft == 1024);
  CHECK(config.fft.cycles == 101);
  CHECK(!config.fft.amplitude.has_value());
}

TEST_CASE("stage defaults cascade into every stage") {
  const json raw = {{"stage_defaults", {{"dc_gain_db", 55.0}}}};
  const ToolConfig config = parse_config(raw);
  for (const StageParams& stage : config.adc.stages) {
    REQUIRE(stage.dc_gain.has_value());
    CHECK(*stage.dc_gain == doctest::Approx(562.341325190349).epsilon(1e-12));
  }
}

TEST_CASE("per-stage entries override the defaults") {
  json raw = {{"stage_defaults", {{"dc_gain_db", 55.0}}}};
  raw["stages"] = json::array();
  for (int i = 0; i < 8; ++i) {
    raw["stages"].push_back(json::object());
  }
  raw["stages"][0]["comparator_offset_v"] = 0.01;
  raw["stages"][2]["dc_gain_db"] = nullptr;  // put one stage back to ideal

  const ToolConfig config = parse_config(raw);
  CHECK(config.adc.stages[0].comparator_offset == 0.01);
  CHECK(config.adc.stages[0].dc_gain.has_value());
  CHECK(config.adc.stages[1].comparator_offset == 0.0);
  CHECK(!config.adc.stages[2].dc_gain.has_value());
}

TEST_CASE("config errors name the offending field") {
  CHECK_THROWS_WITH_AS(parse_config({{"n_bits", 0}}),
                       doctest::Contains("n_bits"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config({{"vrefp", -1.0}, {"vrefn", 1.0}}),
                       doctest::Contains("vref"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config({{"bogus", 1}}),
                       doctest::Contains("bogus"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config({{"rng_seed", -5}}),
                       doctest::Contains("rng_seed"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config({{"stage_defaults", {{"dc_gain_db", "high"}}}}),
      doctest::Contains("dc_gain_db"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config({{"fft", {{"n_fft", 1000}}}}),
                       doctest::Contains("n_fft"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config({{"fft", {{"cycles", 600}}}}),
                       doctest::Contains("cycles"), ConfigError);

  json short_stages = {{"n_bits", 8}};
  short_stages["stages"] = json::array({json::object(), json::object()});
  CHECK_THROWS_WITH_AS(parse_config(short_stages),
                       doctest::Contains("stages"), ConfigError);
}

TEST_CASE("dotted overrides rewrite any field") {
  const ToolConfig wider = parse_config(json::object(), {"n_bits=10"});
  CHECK(wider.adc.n_bits == 10);
  CHECK(wider.adc.stages.size() == 10);

  const ToolConfig gained =
      parse_config(json::object(), {"stage_defaults.dc_gain_db=55"});
  REQUIRE(gained.adc.stages[5].dc_gain.has_value());

  // stages[] overrides materialize the stage list on demand.
  const ToolConfig spot =
      parse_config(json::object(), {"stages[2].cap_ratio=1.5"});
  CHECK(spot.adc.stages[2].cap_ratio == 1.5);
  CHECK(spot.adc.stages[3].cap_ratio == 1.0);

  const ToolConfig ordered = parse_config(
      json::object(), {"n_bits=4", "stages[3].comparator_offset_v=0.01"});
  CHECK(ordered.adc.n_bits == 4);
  CHECK(ordered.adc.stages[3].comparator_offset == 0.01);

  const ToolConfig fft_set =
      parse_config(json::object(), {"fft.cycles=99", "fft.n_fft=2048"});
  CHECK(fft_set.fft.cycles == 99);
  CHECK(fft_set.fft.n_fft == 2048);

  CHECK_THROWS_WITH_AS(
      parse_config(json::object(), {"stages[99].cap_ratio=1"}),
      doctest::Contains("range"), ConfigError);
  CHECK_THROWS_AS(parse_config(json::object(), {"=5"}), ConfigError);
  CHECK_THROWS_AS(parse_config(json::object(), {"noise_sigma_v"}),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(json::object(), {"n_bits..x=1"}), ConfigError);
}

TEST_CASE("summary documents reload as configs") {
  json summary = {{"version", "1.0.0"},
                  {"command", "spectrum"},
                  {"config", {{"n_bits", 6}, {"vrefp", 2.0}}}};
  const ToolConfig config = parse_config(summary);
  CHECK(config.adc.n_bits == 6);
  CHECK(config.adc.refs.vrefp == 2.0);
  CHECK(config.adc.refs.vth == 0.5);  // midpoint of 2 and -1
}

TEST_CASE("resolution reaches a fixpoint") {
  const json first = parse_config({{"noise_sigma_v", 0.001}}).resolved;
  const json second = parse_config(first).resolved;
  CHECK(first == second);
}

TEST_CASE("load_config reads files and reports failures") {
  testsupport::TempDir dir;
  const auto good = dir.path() / "good.json";
  testsupport::write_text(good, "{\"n_bits\": 6}\n");
  CHECK(load_config(good).adc.n_bits == 6);

  const auto bad = dir.path() / "bad.json";
  testsupport::write_text(bad, "{oops");
  CHECK_THROWS_WITH_AS(load_config(bad), doctest::Contains("parse"),
                       ConfigError);

  CHECK_THROWS_WITH_AS(load_config(dir.path() / "absent.json"),
                       doctest::Contains("open"), ConfigError);
}
