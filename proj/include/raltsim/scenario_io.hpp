#pragma once

#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "raltsim/cert.hpp"
#include "raltsim/compliance.hpp"
#include "raltsim/units.hpp"

namespace raltsim {
namespace io {

using nlohmann::json;

namespace detail {

/// Strict-parse helper: every object key must be claimed by the schema.
/// Unknown keys are configuration errors — in this domain a silently
/// ignored typo can invert the meaning of a run.
inline void require_keys(const json& j, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError(path + ": unknown key '" + key + "'");
    }
  }
}

inline const json& get_required(const json& j, const std::string& path,
                                const char* key) {
  if (!j.contains(key)) {
    throw ConfigError(path + ": missing required key '" + key + "'");
  }
  return j.at(key);
}

inline double get_number(const json& j, const std::string& path, const char* key) {
  const json& v = get_required(j, path, key);
  if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return v.get<double>();
}

inline double get_number_or(const json& j, const std::string& path, const char* key,
                            double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

inline bool get_bool_or(const json& j, const std::string& path, const char* key,
                        bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ConfigError(path + "." + key + ": expected a boolean");
  return j.at(key).get<bool>();
}

inline std::string get_string_or(const json& j, const std::string& path,
                                 const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw ConfigError(path + "." + key + ": expected a string");
  return j.at(key).get<std::string>();
}

inline FrequencyBand parse_band(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(path + ": expected [low_hz, high_hz]");
  }
  FrequencyBand band{j[0].get<double>(), j[1].get<double>()};
  try {
    band.validate();
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return band;
}

}  // namespace detail

inline BandPlan parse_band_plan(const json& j, const std::string& path) {
  BandPlan plan = default_band_plan();
  if (!j.is_object()) throw ConfigError(path + ": expected an object of named bands");
  for (const auto& [name, value] : j.items()) {
    plan.entries[name] = detail::parse_band(value, path + "." + name);
  }
  return plan;
}

inline FilterSpec parse_filter(const json& j, const std::string& path) {
  detail::require_keys(j, path,
                       {"passband", "lower_stopband_edge_hz", "upper_stopband_edge_hz",
                        "stopband_attenuation_db", "passband_ripple_db",
                        "insertion_loss_db", "transition"});
  FilterSpec f;
  if (j.contains("passband")) f.passband = detail::parse_band(j.at("passband"), path + ".passband");
  f.lower_stopband_edge_hz =
      detail::get_number_or(j, path, "lower_stopband_edge_hz", f.lower_stopband_edge_hz);
  f.upper_stopband_edge_hz =
      detail::get_number_or(j, path, "upper_stopband_edge_hz", f.upper_stopband_edge_hz);
  f.stopband_attenuation_db =
      detail::get_number_or(j, path, "stopband_attenuation_db", f.stopband_attenuation_db);
  f.passband_ripple_db =
      detail::get_number_or(j, path, "passband_ripple_db", f.passband_ripple_db);
  f.insertion_loss_db =
      detail::get_number_or(j, path, "insertion_loss_db", f.insertion_loss_db);
  if (j.contains("transition")) {
    const json& t = j.at("transition");
    detail::require_keys(t, path + ".transition", {"shape", "order"});
    const std::string shape = detail::get_string_or(t, path + ".transition", "shape", "linear_db");
    if (shape == "linear_db") {
      f.transition.kind = TransitionShape::Kind::linear_db;
    } else if (shape == "polynomial_db") {
      f.transition.kind = TransitionShape::Kind::polynomial_db;
      f.transition.order =
          static_cast<int>(detail::get_number_or(t, path + ".transition", "order", 2));
    } else {
      throw ConfigError(path + ".transition.shape: unknown shape '" + shape + "'");
    }
  }
  try {
    f.validate();
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return f;
}

inline ChirpConfig parse_chirp(const json& j, const std::string& path) {
  detail::require_keys(j, path,
                       {"center_frequency_hz", "sweep_bandwidth_hz", "sweep_period_s",
                        "tx_power_dbm", "baseband_sample_rate_hz", "fft_length",
                        "altitude_ceiling_m"});
  ChirpConfig c;
  c.center_frequency_hz = detail::get_number_or(j, path, "center_frequency_hz", c.center_frequency_hz);
  c.sweep_bandwidth_hz = detail::get_number_or(j, path, "sweep_bandwidth_hz", c.sweep_bandwidth_hz);
  c.sweep_period_s = detail::get_number_or(j, path, "sweep_period_s", c.sweep_period_s);
  c.tx_power_dbm = detail::get_number_or(j, path, "tx_power_dbm", c.tx_power_dbm);
  c.baseband_sample_rate_hz =
      detail::get_number_or(j, path, "baseband_sample_rate_hz", c.baseband_sample_rate_hz);
  c.fft_length = static_cast<std::size_t>(
      detail::get_number_or(j, path, "fft_length", static_cast<double>(c.fft_length)));
  c.altitude_ceiling_m = detail::get_number_or(j, path, "altitude_ceiling_m", c.altitude_ceiling_m);
  return c;
}

inline ReceiverConfig parse_receiver(const json& j, const std::string& path) {
  detail::require_keys(j, path,
                       {"noise_figure_db", "thermal_noise_dbm_hz", "blocking_threshold_dbm",
                        "desensitization_db_per_db", "detection_snr_threshold_db",
                        "gain_compensation_db"});
  ReceiverConfig r;
  r.noise_figure_db = detail::get_number_or(j, path, "noise_figure_db", r.noise_figure_db);
  r.thermal_noise_dbm_hz =
      detail::get_number_or(j, path, "thermal_noise_dbm_hz", r.thermal_noise_dbm_hz);
  r.blocking_threshold_dbm =
      detail::get_number_or(j, path, "blocking_threshold_dbm", r.blocking_threshold_dbm);
  r.desensitization_db_per_db =
      detail::get_number_or(j, path, "desensitization_db_per_db", r.desensitization_db_per_db);
  r.detection_snr_threshold_db =
      detail::get_number_or(j, path, "detection_snr_threshold_db", r.detection_snr_threshold_db);
  r.gain_compensation_db =
      detail::get_number_or(j, path, "gain_compensation_db", r.gain_compensation_db);
  try {
    r.validate();
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return r;
}

inline InterfererSpec parse_interferer(const json& j, const std::string& path) {
  detail::require_keys(j, path,
                       {"name", "class", "band", "eirp_dbm", "eirp_scale", "duty_cycle",
                        "geometry", "shape"});
  InterfererSpec spec;
  spec.name = detail::get_string_or(j, path, "name", spec.name);
  const std::string cls = detail::get_string_or(j, path, "class", "fundamental");
  if (cls == "fundamental") {
    spec.cls = InterfererClass::fundamental;
  } else if (cls == "spurious") {
    spec.cls = InterfererClass::spurious;
  } else {
    throw ConfigError(path + ".class: unknown class '" + cls + "'");
  }
  if (j.contains("band")) spec.emission_band = detail::parse_band(j.at("band"), path + ".band");
  spec.eirp_dbm = detail::get_number_or(j, path, "eirp_dbm", spec.eirp_dbm);
  spec.eirp_scale = detail::get_number_or(j, path, "eirp_scale", spec.eirp_scale);
  spec.duty_cycle = detail::get_number_or(j, path, "duty_cycle", spec.duty_cycle);

  if (j.contains("geometry")) {
    const json& g = j.at("geometry");
    detail::require_keys(g, path + ".geometry", {"type", "distance_m"});
    const std::string type = detail::get_string_or(g, path + ".geometry", "type", "fixed_distance");
    if (type == "fixed_distance") {
      spec.geometry.kind = GeometrySpec::Kind::fixed_distance;
      spec.geometry.distance_m =
          detail::get_number(g, path + ".geometry", "distance_m");
    } else if (type == "ground_below") {
      spec.geometry.kind = GeometrySpec::Kind::ground_below;
    } else {
      throw ConfigError(path + ".geometry.type: unknown type '" + type + "'");
    }
  }

  if (j.contains("shape")) {
    const json& s = j.at("shape");
    detail::require_keys(s, path + ".shape",
                         {"type", "psd_dbm_per_hz", "support", "tones", "injection"});
    SpuriousShape shape;
    const std::string type = detail::get_string_or(s, path + ".shape", "type", "tones");
    if (type == "flat_noise_psd") {
      shape.kind = SpuriousShape::Kind::flat_noise_psd;
      shape.psd_dbm_per_hz = detail::get_number(s, path + ".shape", "psd_dbm_per_hz");
      shape.support = detail::parse_band(detail::get_required(s, path + ".shape", "support"),
                                         path + ".shape.support");
    } else if (type == "tones") {
      shape.kind = SpuriousShape::Kind::tones;
      const json& tones = detail::get_required(s, path + ".shape", "tones");
      if (!tones.is_array()) throw ConfigError(path + ".shape.tones: expected an array");
      for (std::size_t i = 0; i < tones.size(); ++i) {
        const json& t = tones[i];
        const std::string tpath = path + ".shape.tones[" + std::to_string(i) + "]";
        detail::require_keys(t, tpath, {"rf_hz", "eirp_dbm", "baseband_hz"});
        SpuriousTone tone;
        tone.rf_hz = detail::get_number(t, tpath, "rf_hz");
        tone.eirp_dbm = detail::get_number(t, tpath, "eirp_dbm");
        if (t.contains("baseband_hz")) {
          tone.baseband_hz = detail::get_number(t, tpath, "baseband_hz");
        }
        shape.tones.push_back(tone);
      }
    } else {
      throw ConfigError(path + ".shape.type: unknown type '" + type + "'");
    }
    const std::string injection =
        detail::get_string_or(s, path + ".shape", "injection", "spread");
    if (injection == "spread") {
      shape.injection = SpuriousInjection::spread;
    } else if (injection == "coherent") {
      shape.injection = SpuriousInjection::coherent;
    } else {
      throw ConfigError(path + ".shape.injection: unknown mode '" + injection + "'");
    }
    spec.shape = shape;
  }
  return spec;
}

inline AccuracyTable parse_accuracy_table(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array of rows");
  AccuracyTable table;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& r = j[i];
    const std::string rpath = path + "[" + std::to_string(i) + "]";
    detail::require_keys(r, rpath, {"low_ft", "high_ft", "kind", "value"});
    AccuracyRow row;
    row.low_ft = detail::get_number(r, rpath, "low_ft");
    row.high_ft = r.contains("high_ft") && r.at("high_ft").is_null()
                      ? std::numeric_limits<double>::infinity()
                      : detail::get_number(r, rpath, "high_ft");
    const std::string kind = detail::get_string_or(r, rpath, "kind", "absolute_ft");
    if (kind == "absolute_ft") {
      row.rule.kind = ToleranceRule::Kind::absolute_ft;
    } else if (kind == "percent") {
      row.rule.kind = ToleranceRule::Kind::percent;
    } else {
      throw ConfigError(rpath + ".kind: unknown tolerance kind '" + kind + "'");
    }
    row.rule.value = detail::get_number(r, rpath, "value");
    table.rows.push_back(row);
  }
  try {
    table.validate();
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return table;
}

struct LoadedScenario {
  Scenario scenario;
  double pass_rate = 0.95;
  json compare_block;  // null unless the file defines a comparison
};

inline LoadedScenario parse_scenario(const json& j, const std::string& path) {
  detail::require_keys(j, path,
                       {"seed", "band_plan", "filter", "chirp", "receiver", "channel",
                        "propagation", "interferers", "sweep", "accuracy_table",
                        "compare"});
  LoadedScenario loaded;
  Scenario& sc = loaded.scenario;

  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned()) throw ConfigError(path + ".seed: expected an unsigned integer");
    sc.seed = s.get<std::uint64_t>();
  }
  if (j.contains("band_plan")) sc.bands = parse_band_plan(j.at("band_plan"), path + ".band_plan");
  if (j.contains("filter")) {
    if (j.at("filter").is_null()) {
      sc.filter.reset();
    } else {
      sc.filter = parse_filter(j.at("filter"), path + ".filter");
    }
  }
  if (j.contains("chirp")) sc.chirp = parse_chirp(j.at("chirp"), path + ".chirp");
  if (j.contains("receiver")) sc.rx = parse_receiver(j.at("receiver"), path + ".receiver");
  if (j.contains("channel")) {
    const json& ch = j.at("channel");
    detail::require_keys(ch, path + ".channel", {"terrain_reflectivity_db", "echo_enabled"});
    sc.terrain_reflectivity_db = detail::get_number_or(ch, path + ".channel",
                                                       "terrain_reflectivity_db",
                                                       sc.terrain_reflectivity_db);
    sc.echo_enabled = detail::get_bool_or(ch, path + ".channel", "echo_enabled", true);
  }
  if (j.contains("propagation")) {
    const json& p = j.at("propagation");
    detail::require_keys(p, path + ".propagation", {"model", "carrier_for_loss_hz"});
    const std::string model = detail::get_string_or(p, path + ".propagation", "model", "free_space");
    if (model != "free_space") {
      throw ConfigError(path + ".propagation.model: unknown model '" + model + "'");
    }
    if (p.contains("carrier_for_loss_hz") && !p.at("carrier_for_loss_hz").is_null()) {
      sc.propagation.carrier_for_loss_hz =
          detail::get_number(p, path + ".propagation", "carrier_for_loss_hz");
    }
  }
  if (j.contains("interferers")) {
    const json& arr = j.at("interferers");
    if (!arr.is_array()) throw ConfigError(path + ".interferers: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      sc.interferers.push_back(
          parse_interferer(arr[i], path + ".interferers[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("accuracy_table")) {
    sc.table = parse_accuracy_table(j.at("accuracy_table"), path + ".accuracy_table");
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    detail::require_keys(s, path + ".sweep",
                         {"altitudes_ft", "grid", "trials_per_point", "pass_rate"});
    if (s.contains("altitudes_ft") && s.contains("grid")) {
      throw ConfigError(path + ".sweep: give either altitudes_ft or grid, not both");
    }
    if (s.contains("altitudes_ft")) {
      const json& alts = s.at("altitudes_ft");
      if (!alts.is_array() || alts.empty()) {
        throw ConfigError(path + ".sweep.altitudes_ft: expected a non-empty array");
      }
      sc.altitudes_ft.clear();
      for (const auto& a : alts) {
        if (!a.is_number()) throw ConfigError(path + ".sweep.altitudes_ft: expected numbers");
        sc.altitudes_ft.push_back(a.get<double>());
      }
    } else if (s.contains("grid")) {
      const json& g = s.at("grid");
      detail::require_keys(g, path + ".sweep.grid", {"type", "min_ft", "max_ft", "points"});
      const std::string type = detail::get_string_or(g, path + ".sweep.grid", "type", "log");
      if (type != "log") throw ConfigError(path + ".sweep.grid.type: unknown type '" + type + "'");
      sc.altitudes_ft = log_spaced_altitudes_ft(
          detail::get_number_or(g, path + ".sweep.grid", "min_ft", 3.0),
          detail::get_number_or(g, path + ".sweep.grid", "max_ft", 2500.0),
          static_cast<int>(detail::get_number_or(g, path + ".sweep.grid", "points", 25)));
    }
    sc.trials_per_point = static_cast<int>(
        detail::get_number_or(s, path + ".sweep", "trials_per_point", sc.trials_per_point));
    loaded.pass_rate = detail::get_number_or(s, path + ".sweep", "pass_rate", 0.95);
  }
  if (j.contains("compare")) loaded.compare_block = j.at("compare");
  return loaded;
}

struct LoadedComparison {
  UnitConfig unit_a;
  UnitConfig unit_b;
  ComparisonEnvironment env;
  std::vector<double> profile_ft;
  ToleranceRule max_divergence{ToleranceRule::Kind::absolute_ft, 2.0};
};

inline UnitConfig parse_unit(const json& j, const std::string& path,
                             const Scenario& base, const std::string& default_name) {
  detail::require_keys(j, path, {"name", "chirp", "receiver", "filter"});
  UnitConfig unit;
  unit.name = detail::get_string_or(j, path, "name", default_name);
  unit.chirp = j.contains("chirp") ? parse_chirp(j.at("chirp"), path + ".chirp") : base.chirp;
  unit.rx = j.contains("receiver") ? parse_receiver(j.at("receiver"), path + ".receiver") : base.rx;
  if (j.contains("filter")) {
    if (j.at("filter").is_null()) {
      unit.filter.reset();
    } else {
      unit.filter = parse_filter(j.at("filter"), path + ".filter");
    }
  } else {
    unit.filter = base.filter;
  }
  return unit;
}

inline LoadedComparison parse_comparison(const LoadedScenario& loaded,
                                         const std::string& path) {
  const json& j = loaded.compare_block;
  if (j.is_null()) {
    throw ConfigError(path + ": scenario file has no 'compare' block");
  }
  detail::require_keys(j, path + ".compare",
                       {"unit_a", "unit_b", "profile", "max_divergence"});
  LoadedComparison cmp;
  const Scenario& base = loaded.scenario;
  cmp.unit_a = parse_unit(detail::get_required(j, path + ".compare", "unit_a"),
                          path + ".compare.unit_a", base, "unit_a");
  cmp.unit_b = parse_unit(detail::get_required(j, path + ".compare", "unit_b"),
                          path + ".compare.unit_b", base, "unit_b");
  cmp.env.interferers = base.interferers;
  cmp.env.propagation = base.propagation;
  cmp.env.bands = base.bands;
  cmp.env.terrain_reflectivity_db = base.terrain_reflectivity_db;
  cmp.env.echo_enabled = base.echo_enabled;
  cmp.env.seed = base.seed;

  const json& p = detail::get_required(j, path + ".compare", "profile");
  detail::require_keys(p, path + ".compare.profile",
                       {"ceiling_ft", "floor_ft", "steps", "shape"});
  const std::string shape =
      detail::get_string_or(p, path + ".compare.profile", "shape", "linear");
  ProfileShape ps;
  if (shape == "linear") {
    ps = ProfileShape::linear;
  } else if (shape == "exponential") {
    ps = ProfileShape::exponential;
  } else {
    throw ConfigError(path + ".compare.profile.shape: unknown shape '" + shape + "'");
  }
  try {
    cmp.profile_ft = descent_profile(
        detail::get_number_or(p, path + ".compare.profile", "ceiling_ft", 2500.0),
        detail::get_number_or(p, path + ".compare.profile", "floor_ft", 3.0),
        static_cast<int>(detail::get_number_or(p, path + ".compare.profile", "steps", 50)),
        ps);
  } catch (const std::exception& e) {
    throw ConfigError(path + ".compare.profile: " + std::string(e.what()));
  }

  if (j.contains("max_divergence")) {
    const json& d = j.at("max_divergence");
    detail::require_keys(d, path + ".compare.max_divergence", {"kind", "value"});
    const std::string kind =
        detail::get_string_or(d, path + ".compare.max_divergence", "kind", "absolute_ft");
    if (kind == "absolute_ft") {
      cmp.max_divergence.kind = ToleranceRule::Kind::absolute_ft;
    } else if (kind == "percent") {
      cmp.max_divergence.kind = ToleranceRule::Kind::percent;
    } else {
      throw ConfigError(path + ".compare.max_divergence.kind: unknown kind '" + kind + "'");
    }
    cmp.max_divergence.value =
        detail::get_number(d, path + ".compare.max_divergence", "value");
  }
  return cmp;
}

inline cert::ChangeDescriptor parse_change_descriptor(const json& j,
                                                      const std::string& path) {
  detail::require_keys(j, path,
                       {"affects_form", "affects_fit", "affects_intended_function",
                        "requires_operator_training", "requires_full_mops_retest",
                        "hardware_change", "description", "affected_part_numbers",
                        "open_problem_reports"});
  cert::ChangeDescriptor change;
  change.affects_form = detail::get_bool_or(j, path, "affects_form", false);
  change.affects_fit = detail::get_bool_or(j, path, "affects_fit", false);
  change.affects_intended_function =
      detail::get_bool_or(j, path, "affects_intended_function", false);
  change.requires_operator_training =
      detail::get_bool_or(j, path, "requires_operator_training", false);
  change.requires_full_mops_retest =
      detail::get_bool_or(j, path, "requires_full_mops_retest", false);
  change.hardware_change = detail::get_bool_or(j, path, "hardware_change", false);
  change.description = detail::get_string_or(j, path, "description", "");
  if (j.contains("affected_part_numbers")) {
    const json& pns = j.at("affected_part_numbers");
    if (!pns.is_array()) throw ConfigError(path + ".affected_part_numbers: expected an array");
    for (std::size_t i = 0; i < pns.size(); ++i) {
      const std::string ppath = path + ".affected_part_numbers[" + std::to_string(i) + "]";
      detail::require_keys(pns[i], ppath, {"old", "new"});
      change.affected_part_numbers.push_back(
          {detail::get_string_or(pns[i], ppath, "old", ""),
           detail::get_string_or(pns[i], ppath, "new", "")});
    }
  }
  if (j.contains("open_problem_reports")) {
    const json& oprs = j.at("open_problem_reports");
    if (!oprs.is_array()) throw ConfigError(path + ".open_problem_reports: expected an array");
    for (std::size_t i = 0; i < oprs.size(); ++i) {
      const std::string opath = path + ".open_problem_reports[" + std::to_string(i) + "]";
      detail::require_keys(oprs[i], opath, {"id", "disposition"});
      change.open_problem_reports.push_back(
          {detail::get_string_or(oprs[i], opath, "id", ""),
           detail::get_string_or(oprs[i], opath, "disposition", "")});
    }
  }
  try {
    change.validate();
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return change;
}

/// Parses a JSON document from disk, converting parse failures into
/// ConfigError with file, line, and column.
inline json load_json_file(const std::string& file_path) {
  std::ifstream in(file_path);
  if (!in) throw ConfigError(file_path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(file_path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": " + e.what());
  }
}

inline LoadedScenario load_scenario_file(const std::string& file_path) {
  LoadedScenario loaded = parse_scenario(load_json_file(file_path), file_path);
  try {
    loaded.scenario.validate();
  } catch (const std::exception& e) {
    throw ConfigError(file_path + ": " + e.what());
  }
  return loaded;
}

inline cert::ChangeDescriptor load_change_file(const std::string& file_path) {
  return parse_change_descriptor(load_json_file(file_path), file_path);
}

}  // namespace io
}  // namespace raltsim
