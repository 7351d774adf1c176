#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "raltsim/compliance.hpp"
#include "raltsim/units.hpp"

namespace raltsim {
namespace io {

namespace detail {

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace detail

/// Compliance report as canonical JSON (sorted keys, fixed decimals).
inline std::string compliance_report_json(const ComplianceReport& report) {
  using nlohmann::json;
  json points = json::array();
  for (const AltitudePointStats& p : report.points) {
    points.push_back(json{{"altitude_ft", detail::fixed(p.altitude_ft, 4)},
                          {"trials", p.trials},
                          {"within", p.within},
                          {"erroneous", p.erroneous},
                          {"ncd", p.ncd},
                          {"within_rate", detail::fixed(p.within_rate(), 6)},
                          {"ncd_rate", detail::fixed(p.ncd_rate(), 6)},
                          {"erroneous_rate", detail::fixed(p.erroneous_rate(), 6)}});
  }
  const json j{{"tool_version", report.tool_version},
               {"fingerprint", report.fingerprint},
               {"pass_rate_required", detail::fixed(report.pass_rate_required, 6)},
               {"verdict", report.pass ? "pass" : "fail"},
               {"failing_points", report.failing_points},
               {"points", points}};
  return j.dump(2) + "\n";
}

/// Per-trial CSV: altitude_ft,trial,estimate_ft,error_ft,snr_db,classification.
/// NCD rows leave estimate and error empty.
inline std::string trials_csv(const std::vector<TrialResult>& trials) {
  std::string out = "altitude_ft,trial,estimate_ft,error_ft,snr_db,classification\n";
  for (const TrialResult& tr : trials) {
    out += detail::fixed(tr.true_altitude_ft, 4);
    out += ',';
    out += std::to_string(tr.trial);
    out += ',';
    if (tr.output.altitude_m.has_value()) {
      out += detail::fixed(meters_to_feet(*tr.output.altitude_m), 4);
    }
    out += ',';
    if (tr.error_ft.has_value()) out += detail::fixed(*tr.error_ft, 4);
    out += ',';
    out += std::isfinite(tr.output.snr_db) ? detail::fixed(tr.output.snr_db, 2) : "-inf";
    out += ',';
    out += to_string(tr.classification);
    out += '\n';
  }
  return out;
}

inline std::string comparison_report_json(const ComparisonReport& report) {
  using nlohmann::json;
  json steps = json::array();
  for (const ComparisonStep& s : report.steps) {
    json step{{"altitude_ft", detail::fixed(s.altitude_ft, 4)},
              {"a_validity", to_string(s.output_a.validity)},
              {"b_validity", to_string(s.output_b.validity)},
              {"ncd_disagreement", s.ncd_disagreement}};
    if (s.output_a.altitude_m) {
      step["a_estimate_ft"] = detail::fixed(meters_to_feet(*s.output_a.altitude_m), 4);
    }
    if (s.output_b.altitude_m) {
      step["b_estimate_ft"] = detail::fixed(meters_to_feet(*s.output_b.altitude_m), 4);
    }
    if (s.divergence_ft) step["divergence_ft"] = detail::fixed(*s.divergence_ft, 4);
    steps.push_back(step);
  }
  const json j{{"tool_version", tool_version_string},
               {"unit_a", report.unit_a},
               {"unit_b", report.unit_b},
               {"max_divergence_ft", detail::fixed(report.max_divergence_ft, 4)},
               {"ncd_disagreements", report.ncd_disagreements},
               {"verdict", report.pass ? "pass" : "fail"},
               {"steps", steps}};
  return j.dump(2) + "\n";
}

inline std::string comparison_csv(const ComparisonReport& report) {
  std::string out =
      "step,altitude_ft,a_estimate_ft,b_estimate_ft,divergence_ft,a_validity,b_validity\n";
  for (std::size_t i = 0; i < report.steps.size(); ++i) {
    const ComparisonStep& s = report.steps[i];
    out += std::to_string(i);
    out += ',';
    out += detail::fixed(s.altitude_ft, 4);
    out += ',';
    if (s.output_a.altitude_m) out += detail::fixed(meters_to_feet(*s.output_a.altitude_m), 4);
    out += ',';
    if (s.output_b.altitude_m) out += detail::fixed(meters_to_feet(*s.output_b.altitude_m), 4);
    out += ',';
    if (s.divergence_ft) out += detail::fixed(*s.divergence_ft, 4);
    out += ',';
    out += to_string(s.output_a.validity);
    out += ',';
    out += to_string(s.output_b.validity);
    out += '\n';
  }
  return out;
}

/// Atomic file write: temp file in the target directory, then rename.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
  }
  fs::rename(tmp, path);
}

}  // namespace io
}  // namespace raltsim
