#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "raltsim/altimeter.hpp"
#include "raltsim/interference.hpp"
#include "raltsim/spectrum.hpp"
#include "raltsim/units.hpp"

namespace raltsim {

/// One accuracy row: altitudes in [low_ft, high_ft) must be reported within
/// the rule's bound.
struct ToleranceRule {
  enum class Kind { absolute_ft, percent };
  Kind kind = Kind::absolute_ft;
  double value = 3.0;  // feet, or fraction of altitude (0.03 = 3%)

  double tolerance_ft(double altitude_ft) const {
    return kind == Kind::absolute_ft ? value : value * altitude_ft;
  }

  bool operator==(const ToleranceRule&) const = default;
};

struct AccuracyRow {
  double low_ft = 0.0;
  double high_ft = 0.0;  // exclusive; infinity for the open-ended top row
  ToleranceRule rule{};

  bool operator==(const AccuracyRow&) const = default;
};

/// Altitude-accuracy requirement table. Rows must partition [lowest, inf)
/// with no gaps or overlaps.
struct AccuracyTable {
  std::vector<AccuracyRow> rows;

  void validate() const {
    if (rows.empty()) throw std::invalid_argument("AccuracyTable: no rows");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!(rows[i].low_ft < rows[i].high_ft)) {
        throw std::invalid_argument("AccuracyTable: row interval is empty");
      }
      if (i + 1 < rows.size() && rows[i].high_ft != rows[i + 1].low_ft) {
        throw std::invalid_argument("AccuracyTable: rows must tile without gaps");
      }
    }
    if (std::isfinite(rows.back().high_ft)) {
      throw std::invalid_argument("AccuracyTable: last row must be open-ended");
    }
  }

  double lowest_ft() const { return rows.front().low_ft; }

  bool operator==(const AccuracyTable&) const = default;
};

/// Shipped requirement: +/-3 ft below 100 ft, +/-3% to 500 ft, +/-5% above.
inline AccuracyTable default_accuracy_table() {
  AccuracyTable t;
  t.rows = {
      {3.0, 100.0, {ToleranceRule::Kind::absolute_ft, 3.0}},
      {100.0, 500.0, {ToleranceRule::Kind::percent, 0.03}},
      {500.0, std::numeric_limits<double>::infinity(), {ToleranceRule::Kind::percent, 0.05}},
  };
  return t;
}

/// Allowed +/- error in feet at the given altitude. Below the table's lower
/// boundary the requirement is undefined and queries are rejected.
inline double tolerance_at(const AccuracyTable& table, double altitude_ft) {
  table.validate();
  if (altitude_ft < table.lowest_ft()) {
    throw std::domain_error("tolerance_at: altitude below the table's lower bound");
  }
  for (const AccuracyRow& row : table.rows) {
    if (altitude_ft >= row.low_ft && altitude_ft < row.high_ft) {
      return row.rule.tolerance_ft(altitude_ft);
    }
  }
  throw std::logic_error("tolerance_at: unreachable");
}

/// Log-spaced altitude grid, the default sweep layout.
inline std::vector<double> log_spaced_altitudes_ft(double min_ft, double max_ft,
                                                   int points) {
  if (!(min_ft > 0.0) || !(max_ft > min_ft) || points < 2) {
    throw std::domain_error("log_spaced_altitudes_ft: bad grid parameters");
  }
  std::vector<double> grid(points);
  const double ratio = std::log(max_ft / min_ft);
  for (int i = 0; i < points; ++i) {
    grid[i] = min_ft * std::exp(ratio * static_cast<double>(i) / (points - 1));
  }
  grid.front() = min_ft;
  grid.back() = max_ft;
  return grid;
}

struct Scenario {
  ChirpConfig chirp{};
  ReceiverConfig rx{};
  std::optional<FilterSpec> filter = FilterSpec{};
  std::vector<InterfererSpec> interferers;
  std::vector<double> altitudes_ft = log_spaced_altitudes_ft(3.0, 2500.0, 25);
  int trials_per_point = 200;
  std::uint64_t seed = 1;
  double terrain_reflectivity_db = 10.0;
  bool echo_enabled = true;
  PropagationModel propagation{};
  BandPlan bands = default_band_plan();
  AccuracyTable table = default_accuracy_table();

  void validate() const {
    bands.validate();
    chirp.validate(bands.ralt());
    rx.validate();
    table.validate();
    if (filter.has_value()) filter->validate();
    for (const InterfererSpec& intf : interferers) intf.validate(bands.ralt());
    if (altitudes_ft.empty()) {
      throw ConfigError("Scenario: altitude grid is empty");
    }
    const double ceiling_ft = meters_to_feet(chirp.altitude_ceiling_m);
    for (double alt : altitudes_ft) {
      if (alt < table.lowest_ft() || alt > ceiling_ft) {
        throw ConfigError("Scenario: altitude " + std::to_string(alt) +
                          " ft outside [" + std::to_string(table.lowest_ft()) + ", " +
                          std::to_string(ceiling_ft) + "] ft");
      }
    }
    if (trials_per_point < 1) {
      throw ConfigError("Scenario: trials_per_point must be >= 1");
    }
  }
};

enum class TrialClass { within_tolerance, erroneous, ncd };

inline const char* to_string(TrialClass c) {
  switch (c) {
    case TrialClass::within_tolerance: return "within_tolerance";
    case TrialClass::erroneous: return "erroneous";
    default: return "ncd";
  }
}

struct TrialResult {
  double true_altitude_ft = 0.0;
  int trial = 0;
  AltimeterOutput output;
  std::optional<double> error_ft;  // set when valid
  TrialClass classification = TrialClass::ncd;

  bool within_tolerance() const { return classification == TrialClass::within_tolerance; }
  bool erroneous() const { return classification == TrialClass::erroneous; }
  bool ncd() const { return classification == TrialClass::ncd; }
};

namespace detail {

inline void hash_u64(std::uint64_t& h, std::uint64_t v) {
  // FNV-1a over the value's bytes.
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xFFULL;
    h *= 0x100000001B3ULL;
  }
}

inline void hash_double(std::uint64_t& h, double v) {
  hash_u64(h, std::bit_cast<std::uint64_t>(v));
}

inline void hash_string(std::uint64_t& h, const std::string& s) {
  hash_u64(h, s.size());
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
}

inline void hash_band(std::uint64_t& h, const FrequencyBand& b) {
  hash_double(h, b.low_hz);
  hash_double(h, b.high_hz);
}

inline void hash_filter(std::uint64_t& h, const std::optional<FilterSpec>& f) {
  hash_u64(h, f.has_value() ? 1 : 0);
  if (!f) return;
  hash_band(h, f->passband);
  hash_double(h, f->lower_stopband_edge_hz);
  hash_double(h, f->upper_stopband_edge_hz);
  hash_double(h, f->stopband_attenuation_db);
  hash_double(h, f->passband_ripple_db);
  hash_double(h, f->insertion_loss_db);
  hash_u64(h, static_cast<std::uint64_t>(f->transition.kind));
  hash_u64(h, static_cast<std::uint64_t>(f->transition.order));
}

inline void hash_chirp(std::uint64_t& h, const ChirpConfig& c) {
  hash_double(h, c.center_frequency_hz);
  hash_double(h, c.sweep_bandwidth_hz);
  hash_double(h, c.sweep_period_s);
  hash_double(h, c.tx_power_dbm);
  hash_double(h, c.baseband_sample_rate_hz);
  hash_u64(h, c.fft_length);
  hash_double(h, c.altitude_ceiling_m);
}

inline void hash_rx(std::uint64_t& h, const ReceiverConfig& r) {
  hash_double(h, r.noise_figure_db);
  hash_double(h, r.thermal_noise_dbm_hz);
  hash_double(h, r.blocking_threshold_dbm);
  hash_double(h, r.desensitization_db_per_db);
  hash_double(h, r.detection_snr_threshold_db);
  hash_double(h, r.gain_compensation_db);
}

inline void hash_interferer(std::uint64_t& h, const InterfererSpec& i) {
  hash_string(h, i.name);
  hash_band(h, i.emission_band);
  hash_u64(h, static_cast<std::uint64_t>(i.cls));
  hash_double(h, i.eirp_dbm);
  hash_double(h, i.eirp_scale);
  hash_double(h, i.duty_cycle);
  hash_u64(h, static_cast<std::uint64_t>(i.geometry.kind));
  hash_double(h, i.geometry.distance_m);
  hash_u64(h, i.shape.has_value() ? 1 : 0);
  if (!i.shape) return;
  hash_u64(h, static_cast<std::uint64_t>(i.shape->kind));
  hash_double(h, i.shape->psd_dbm_per_hz);
  hash_band(h, i.shape->support);
  hash_u64(h, static_cast<std::uint64_t>(i.shape->injection));
  hash_u64(h, i.shape->tones.size());
  for (const SpuriousTone& t : i.shape->tones) {
    hash_double(h, t.rf_hz);
    hash_double(h, t.eirp_dbm);
    hash_u64(h, t.baseband_hz.has_value() ? 1 : 0);
    if (t.baseband_hz) hash_double(h, *t.baseband_hz);
  }
}

}  // namespace detail

/// Hash of every configuration field plus the seed, printed as 16 hex chars.
/// Reports carry it so evidence can be traced back to the exact scenario.
inline std::string scenario_fingerprint(const Scenario& sc) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  detail::hash_chirp(h, sc.chirp);
  detail::hash_rx(h, sc.rx);
  detail::hash_filter(h, sc.filter);
  detail::hash_u64(h, sc.interferers.size());
  for (const InterfererSpec& i : sc.interferers) detail::hash_interferer(h, i);
  detail::hash_u64(h, sc.altitudes_ft.size());
  for (double a : sc.altitudes_ft) detail::hash_double(h, a);
  detail::hash_u64(h, static_cast<std::uint64_t>(sc.trials_per_point));
  detail::hash_u64(h, sc.seed);
  detail::hash_double(h, sc.terrain_reflectivity_db);
  detail::hash_u64(h, sc.echo_enabled ? 1 : 0);
  detail::hash_u64(h, static_cast<std::uint64_t>(sc.propagation.model));
  detail::hash_u64(h, sc.propagation.carrier_for_loss_hz.has_value() ? 1 : 0);
  if (sc.propagation.carrier_for_loss_hz) {
    detail::hash_double(h, *sc.propagation.carrier_for_loss_hz);
  }
  detail::hash_u64(h, sc.bands.entries.size());
  for (const auto& [name, band] : sc.bands.entries) {
    detail::hash_string(h, name);
    detail::hash_band(h, band);
  }
  detail::hash_u64(h, sc.table.rows.size());
  for (const AccuracyRow& row : sc.table.rows) {
    detail::hash_double(h, row.low_ft);
    detail::hash_double(h, row.high_ft);
    detail::hash_u64(h, static_cast<std::uint64_t>(row.rule.kind));
    detail::hash_double(h, row.rule.value);
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

struct SweepResult {
  std::vector<TrialResult> trials;
  std::string fingerprint;
};

/// Runs one (altitude, trial) cell of a sweep. Trials are keyed by indices so
/// results are independent of execution order.
inline TrialResult run_trial(const Scenario& sc, std::size_t altitude_index,
                             int trial_index) {
  const double true_ft = sc.altitudes_ft[altitude_index];
  const double true_m = feet_to_meters(true_ft);
  const std::uint64_t trial_seed =
      derive_stream(sc.seed, altitude_index + 1, static_cast<std::uint64_t>(trial_index) + 1);
  const FilterSpec* filter = sc.filter.has_value() ? &*sc.filter : nullptr;

  TrialResult result;
  result.true_altitude_ft = true_ft;
  result.trial = trial_index;
  try {
    const BasebandInterference injected =
        inband_injection(sc.interferers, filter, sc.chirp, true_m, sc.propagation,
                         derive_stream(trial_seed, 1), sc.bands.ralt());
    EchoChannel channel{true_m, sc.terrain_reflectivity_db, sc.echo_enabled};
    const auto samples = synthesize_dechirped(sc.chirp, channel, sc.rx, filter,
                                              injected, derive_stream(trial_seed, 2));
    result.output = estimate_altitude(samples, sc.chirp, sc.rx);
  } catch (const std::exception& e) {
    throw ConfigError("trial (altitude " + std::to_string(true_ft) + " ft, trial " +
                      std::to_string(trial_index) + "): " + e.what());
  }

  if (result.output.validity == Validity::valid) {
    const double est_ft = meters_to_feet(*result.output.altitude_m);
    result.error_ft = est_ft - true_ft;
    const double tol = tolerance_at(sc.table, true_ft);
    result.classification = std::abs(*result.error_ft) <= tol
                                ? TrialClass::within_tolerance
                                : TrialClass::erroneous;
  } else {
    result.classification = TrialClass::ncd;
  }
  return result;
}

/// Full Monte Carlo sweep over altitudes x trials. Deterministic for a fixed
/// seed; the trial order never affects any individual result.
inline SweepResult run_sweep(const Scenario& sc) {
  sc.validate();
  SweepResult out;
  out.fingerprint = scenario_fingerprint(sc);
  out.trials.reserve(sc.altitudes_ft.size() * static_cast<std::size_t>(sc.trials_per_point));
  for (std::size_t ai = 0; ai < sc.altitudes_ft.size(); ++ai) {
    for (int ti = 0; ti < sc.trials_per_point; ++ti) {
      out.trials.push_back(run_trial(sc, ai, ti));
    }
  }
  return out;
}

struct AltitudePointStats {
  double altitude_ft = 0.0;
  int trials = 0;
  int within = 0;
  int erroneous = 0;
  int ncd = 0;

  double within_rate() const { return trials > 0 ? static_cast<double>(within) / trials : 0.0; }
  double ncd_rate() const { return trials > 0 ? static_cast<double>(ncd) / trials : 0.0; }
  double erroneous_rate() const {
    return trials > 0 ? static_cast<double>(erroneous) / trials : 0.0;
  }
};

struct ComplianceReport {
  std::vector<AltitudePointStats> points;
  bool pass = false;
  double pass_rate_required = 0.95;
  std::string fingerprint;
  std::string tool_version;
  std::vector<std::string> failing_points;  // human-readable diagnoses

  double overall_ncd_rate() const {
    long total = 0, ncd = 0;
    for (const auto& p : points) {
      total += p.trials;
      ncd += p.ncd;
    }
    return total > 0 ? static_cast<double>(ncd) / static_cast<double>(total) : 0.0;
  }
};

inline constexpr const char* tool_version_string = "raltsim 0.1.0";

/// Aggregates trial classifications per altitude. The verdict is pass only if
/// every altitude point reaches the required within-tolerance rate AND shows
/// zero erroneous (valid-but-wrong) trials; a wrong value that looks valid is
/// treated as strictly worse than no value at all.
inline ComplianceReport check_compliance(const SweepResult& sweep,
                                         const AccuracyTable& table,
                                         double pass_rate = 0.95) {
  table.validate();
  if (sweep.trials.empty()) {
    throw std::invalid_argument("check_compliance: no trial results");
  }
  ComplianceReport report;
  report.pass_rate_required = pass_rate;
  report.fingerprint = sweep.fingerprint;
  report.tool_version = tool_version_string;

  for (const TrialResult& tr : sweep.trials) {
    AltitudePointStats* stats = nullptr;
    for (auto& p : report.points) {
      if (p.altitude_ft == tr.true_altitude_ft) {
        stats = &p;
        break;
      }
    }
    if (stats == nullptr) {
      report.points.push_back(AltitudePointStats{tr.true_altitude_ft, 0, 0, 0, 0});
      stats = &report.points.back();
    }
    stats->trials += 1;
    switch (tr.classification) {
      case TrialClass::within_tolerance: stats->within += 1; break;
      case TrialClass::erroneous: stats->erroneous += 1; break;
      case TrialClass::ncd: stats->ncd += 1; break;
    }
  }

  report.pass = true;
  for (const auto& p : report.points) {
    const bool rate_ok = p.within_rate() >= pass_rate;
    const bool no_erroneous = p.erroneous == 0;
    if (!rate_ok || !no_erroneous) {
      report.pass = false;
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "%.2f ft: within_rate %.4f (need %.4f), erroneous %d", p.altitude_ft,
                    p.within_rate(), pass_rate, p.erroneous);
      report.failing_points.emplace_back(buf);
    }
  }
  return report;
}

enum class ProfileShape { linear, exponential };

/// Monotone descent from ceiling to floor, endpoints exact.
inline std::vector<double> descent_profile(double ceiling_ft, double floor_ft,
                                           int steps, ProfileShape shape) {
  if (!(ceiling_ft > floor_ft) || !(floor_ft >= 3.0) || steps < 2) {
    throw std::domain_error("descent_profile: require ceiling > floor >= 3 ft, steps >= 2");
  }
  std::vector<double> profile(steps);
  for (int i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / (steps - 1);
    if (shape == ProfileShape::linear) {
      profile[i] = ceiling_ft + (floor_ft - ceiling_ft) * t;
    } else {
      profile[i] = ceiling_ft * std::pow(floor_ft / ceiling_ft, t);
    }
  }
  profile.front() = ceiling_ft;
  profile.back() = floor_ft;
  return profile;
}

/// One altimeter unit in a dual installation.
struct UnitConfig {
  std::string name = "unit";
  ChirpConfig chirp{};
  ReceiverConfig rx{};
  std::optional<FilterSpec> filter;
};

/// Environment shared by both units of a comparison (paired seeds).
struct ComparisonEnvironment {
  std::vector<InterfererSpec> interferers;
  PropagationModel propagation{};
  BandPlan bands = default_band_plan();
  double terrain_reflectivity_db = 10.0;
  bool echo_enabled = true;
  std::uint64_t seed = 1;
};

struct ComparisonStep {
  double altitude_ft = 0.0;
  AltimeterOutput output_a;
  AltimeterOutput output_b;
  std::optional<double> divergence_ft;  // set when both units are valid
  bool ncd_disagreement = false;
};

struct ComparisonReport {
  std::vector<ComparisonStep> steps;
  double max_divergence_ft = 0.0;
  int ncd_disagreements = 0;
  bool pass = false;
  std::string unit_a;
  std::string unit_b;
};

namespace detail {

inline AltimeterOutput run_unit_step(const UnitConfig& unit,
                                     const ComparisonEnvironment& env,
                                     double altitude_m, std::uint64_t step_seed) {
  const FilterSpec* filter = unit.filter.has_value() ? &*unit.filter : nullptr;
  const BasebandInterference injected =
      inband_injection(env.interferers, filter, unit.chirp, altitude_m,
                       env.propagation, derive_stream(step_seed, 1), env.bands.ralt());
  EchoChannel channel{altitude_m, env.terrain_reflectivity_db, env.echo_enabled};
  const auto samples = synthesize_dechirped(unit.chirp, channel, unit.rx, filter,
                                            injected, derive_stream(step_seed, 2));
  return estimate_altitude(samples, unit.chirp, unit.rx);
}

}  // namespace detail

/// Flies both units down the same profile with a shared seed stream (paired
/// trials) and reports per-step divergence. Pass verdict: wherever both units
/// produce valid altitudes, |h_a - h_b| stays within `max_divergence`.
inline ComparisonReport dual_comparison(const std::vector<double>& profile_ft,
                                        const UnitConfig& unit_a,
                                        const UnitConfig& unit_b,
                                        const ToleranceRule& max_divergence,
                                        const ComparisonEnvironment& env) {
  if (profile_ft.empty()) {
    throw std::invalid_argument("dual_comparison: empty descent profile");
  }
  env.bands.validate();
  unit_a.chirp.validate(env.bands.ralt());
  unit_b.chirp.validate(env.bands.ralt());

  ComparisonReport report;
  report.unit_a = unit_a.name;
  report.unit_b = unit_b.name;
  report.pass = true;

  for (std::size_t si = 0; si < profile_ft.size(); ++si) {
    const double alt_ft = profile_ft[si];
    const double alt_m = feet_to_meters(alt_ft);
    const std::uint64_t step_seed = derive_stream(env.seed, si + 1, 0xD0ULL);

    ComparisonStep step;
    step.altitude_ft = alt_ft;
    step.output_a = detail::run_unit_step(unit_a, env, alt_m, step_seed);
    step.output_b = detail::run_unit_step(unit_b, env, alt_m, step_seed);

    const bool a_valid = step.output_a.validity == Validity::valid;
    const bool b_valid = step.output_b.validity == Validity::valid;
    step.ncd_disagreement = a_valid != b_valid;
    if (step.ncd_disagreement) report.ncd_disagreements += 1;

    if (a_valid && b_valid) {
      const double div_ft = std::abs(meters_to_feet(*step.output_a.altitude_m) -
                                     meters_to_feet(*step.output_b.altitude_m));
      step.divergence_ft = div_ft;
      report.max_divergence_ft = std::max(report.max_divergence_ft, div_ft);
      if (div_ft > max_divergence.tolerance_ft(alt_ft)) report.pass = false;
    }
    report.steps.push_back(step);
  }
  return report;
}

}  // namespace raltsim
