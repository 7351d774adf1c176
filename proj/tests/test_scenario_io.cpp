#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "raltsim/scenario_io.hpp"

using namespace raltsim;

namespace {

const std::string kScenarioDir = RALTSIM_SCENARIO_DIR;
const std::string kDataDir = RALTSIM_TEST_DATA_DIR;

}  // namespace

TEST_CASE("clean scenario file loads with expected settings") {
  const io::LoadedScenario loaded = io::load_scenario_file(kScenarioDir + "/clean.json");
  const Scenario& sc = loaded.scenario;
  CHECK(sc.seed == 20260811);
  REQUIRE(sc.filter.has_value());
  CHECK(sc.filter->insertion_loss_db == 1.5);
  CHECK(sc.rx.gain_compensation_db == 1.5);
  CHECK(sc.chirp.fft_length == 4096);
  CHECK(sc.altitudes_ft.size() == 25);
  CHECK(sc.altitudes_ft.front() == 3.0);
  CHECK(sc.altitudes_ft.back() == 2500.0);
  CHECK(sc.trials_per_point == 200);
  CHECK(loaded.pass_rate == 0.95);
  CHECK(sc.interferers.empty());
}

TEST_CASE("defaults fill unspecified sections") {
  const io::LoadedScenario loaded =
      io::load_scenario_file(kScenarioDir + "/clean_small.json");
  const Scenario& sc = loaded.scenario;
  REQUIRE(sc.filter.has_value());  // default filter present unless "filter": null
  CHECK(sc.chirp == default_chirp());
  CHECK(sc.bands == default_band_plan());
  CHECK(sc.table == default_accuracy_table());
  CHECK(sc.altitudes_ft == std::vector<double>{10.0, 100.0, 1000.0});
}

TEST_CASE("null filter disables the filter") {
  const io::LoadedScenario loaded =
      io::load_scenario_file(kScenarioDir + "/spurious_tone_unfiltered.json");
  CHECK_FALSE(loaded.scenario.filter.has_value());
  REQUIRE(loaded.scenario.interferers.size() == 1);
  const InterfererSpec& spur = loaded.scenario.interferers[0];
  CHECK(spur.cls == InterfererClass::spurious);
  REQUIRE(spur.shape.has_value());
  CHECK(spur.shape->injection == SpuriousInjection::coherent);
  REQUIRE(spur.shape->tones.size() == 1);
  CHECK(spur.shape->tones[0].rf_hz == 3.9e9);
}

TEST_CASE("unknown keys are rejected with their path") {
  try {
    io::load_scenario_file(kDataDir + "/bad_unknown_key.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("chrip") != std::string::npos);
    CHECK(msg.find("unknown key") != std::string::npos);
  }
}

TEST_CASE("syntax errors carry file, line and column") {
  try {
    io::load_scenario_file(kDataDir + "/bad_syntax.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bad_syntax.json:3") != std::string::npos);
  }
}

TEST_CASE("missing files are reported") {
  CHECK_THROWS_AS(io::load_scenario_file(kDataDir + "/does_not_exist.json"), ConfigError);
}

TEST_CASE("module invariants are revalidated on load") {
  const std::string text = R"({
    "chirp": {"center_frequency_hz": 4.39e9},
    "sweep": {"altitudes_ft": [100.0], "trials_per_point": 1}
  })";
  const io::LoadedScenario loaded = io::parse_scenario(nlohmann::json::parse(text), "mem");
  CHECK_THROWS_AS(loaded.scenario.validate(), ConfigError);
}

TEST_CASE("sweep grid and explicit altitudes are mutually exclusive") {
  const std::string text = R"({
    "sweep": {
      "altitudes_ft": [100.0],
      "grid": {"type": "log", "min_ft": 3.0, "max_ft": 2500.0, "points": 5}
    }
  })";
  CHECK_THROWS_AS(io::parse_scenario(nlohmann::json::parse(text), "mem"), ConfigError);
}

TEST_CASE("comparison block parses with unit inheritance") {
  const io::LoadedScenario loaded =
      io::load_scenario_file(kScenarioDir + "/filter_benefit_compare.json");
  const io::LoadedComparison cmp = io::parse_comparison(loaded, "file");
  CHECK(cmp.unit_a.name == "legacy");
  CHECK_FALSE(cmp.unit_a.filter.has_value());
  CHECK(cmp.unit_b.name == "modified");
  REQUIRE(cmp.unit_b.filter.has_value());
  CHECK(cmp.unit_b.rx.gain_compensation_db == 1.5);
  // Chirp inherited from the top-level scenario.
  CHECK(cmp.unit_a.chirp == loaded.scenario.chirp);
  CHECK(cmp.profile_ft.size() == 40);
  CHECK(cmp.env.interferers.size() == 1);
  CHECK(cmp.max_divergence.kind == ToleranceRule::Kind::absolute_ft);
  CHECK(cmp.max_divergence.value == 2.0);
}

TEST_CASE("comparison requested without a compare block fails") {
  const io::LoadedScenario loaded =
      io::load_scenario_file(kScenarioDir + "/clean_small.json");
  CHECK_THROWS_AS(io::parse_comparison(loaded, "file"), ConfigError);
}

TEST_CASE("change descriptor file loads") {
  const cert::ChangeDescriptor change =
      io::load_change_file(kScenarioDir + "/change_filter.json");
  CHECK(change.hardware_change);
  CHECK_FALSE(change.affects_form);
  REQUIRE(change.affected_part_numbers.size() == 1);
  CHECK(change.affected_part_numbers[0].old_pn == "RA-4400-01");
  CHECK(cert::classify_change(change).level == cert::ChangeLevel::minor);
}

TEST_CASE("band plan overrides merge over defaults") {
  const std::string text = R"({
    "band_plan": {"ralt": [4.19e9, 4.41e9]},
    "sweep": {"altitudes_ft": [100.0], "trials_per_point": 1}
  })";
  const io::LoadedScenario loaded = io::parse_scenario(nlohmann::json::parse(text), "mem");
  CHECK(loaded.scenario.bands.ralt() == FrequencyBand{4.19e9, 4.41e9});
  CHECK(loaded.scenario.bands.us_5g() == FrequencyBand{3.7e9, 3.98e9});
}
