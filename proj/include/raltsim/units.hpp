#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace raltsim {

inline constexpr double speed_of_light_m_s = 299'792'458.0;
inline constexpr double meters_per_foot = 0.3048;

inline constexpr double feet_to_meters(double ft) { return ft * meters_per_foot; }
inline constexpr double meters_to_feet(double m) { return m / meters_per_foot; }

/// dB <-> linear power ratio.
inline double db_to_ratio(double db) { return std::pow(10.0, db / 10.0); }
inline double ratio_to_db(double ratio) { return 10.0 * std::log10(ratio); }

/// dBm <-> milliwatts.
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

/// Scenario/configuration problems surfaced to the CLI as exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace raltsim
