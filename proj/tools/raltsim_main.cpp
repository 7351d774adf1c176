// raltsim: FMCW radar altimeter / 5G coexistence simulator and compliance tool.
//
// Exit codes: 0 pass/valid output, 1 usage or configuration error,
// 2 no-computed-data, 3 compliance failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "raltsim/cert.hpp"
#include "raltsim/cert_io.hpp"
#include "raltsim/compliance.hpp"
#include "raltsim/report_io.hpp"
#include "raltsim/scenario_io.hpp"

namespace {

namespace fs = std::filesystem;
using namespace raltsim;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNcd = 2;
constexpr int kExitComplianceFail = 3;

fs::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("RALTSIM_OUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return "out";
}

struct CommonOptions {
  std::string scenario_path;
  std::string out_dir;
  std::string format = "both";
  std::optional<std::uint64_t> seed_override;
  std::optional<int> trials_override;
  bool no_filter = false;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--scenario", opts.scenario_path, "Scenario configuration file (JSON)")
      ->required();
  cmd->add_option("--out", opts.out_dir,
                  "Output directory (default: $RALTSIM_OUT_DIR or ./out)");
  cmd->add_option("--seed", opts.seed_override, "Override the scenario seed");
  cmd->add_option("--trials", opts.trials_override, "Override trials per altitude point");
  cmd->add_flag("--no-filter", opts.no_filter, "Disable the receiver bandpass filter");
  cmd->add_option("--format", opts.format, "Output artifacts: json, csv, or both")
      ->check(CLI::IsMember({"json", "csv", "both"}));
}

io::LoadedScenario load_with_overrides(const CommonOptions& opts) {
  io::LoadedScenario loaded = io::load_scenario_file(opts.scenario_path);
  if (opts.seed_override) loaded.scenario.seed = *opts.seed_override;
  if (opts.trials_override) loaded.scenario.trials_per_point = *opts.trials_override;
  if (opts.no_filter) loaded.scenario.filter.reset();
  loaded.scenario.validate();
  return loaded;
}

int cmd_simulate(const CommonOptions& opts, double altitude_ft, bool write_raw) {
  const io::LoadedScenario loaded = load_with_overrides(opts);
  const Scenario& base = loaded.scenario;

  Scenario single = base;
  single.altitudes_ft = {altitude_ft};
  single.trials_per_point = 1;
  single.validate();

  const TrialResult trial = run_trial(single, 0, 0);
  const AltimeterOutput& out = trial.output;

  std::cout << "altitude_true_ft=" << io::detail::fixed(altitude_ft, 4) << "\n";
  std::cout << "validity=" << to_string(out.validity) << "\n";
  if (out.altitude_m) {
    std::cout << "altitude_estimate_ft=" << io::detail::fixed(meters_to_feet(*out.altitude_m), 4)
              << "\n";
    std::cout << "error_ft=" << io::detail::fixed(*trial.error_ft, 4) << "\n";
  }
  std::cout << "snr_db="
            << (std::isfinite(out.snr_db) ? io::detail::fixed(out.snr_db, 2) : "-inf")
            << "\n";
  std::cout << "classification=" << to_string(trial.classification) << "\n";

  if (write_raw) {
    const fs::path dir = resolve_out_dir(opts.out_dir);
    io::write_file_atomic(dir / "simulate_trial.csv", io::trials_csv({trial}));
  }
  return out.validity == Validity::valid ? kExitOk : kExitNcd;
}

int cmd_sweep(const CommonOptions& opts) {
  const io::LoadedScenario loaded = load_with_overrides(opts);
  const SweepResult sweep = run_sweep(loaded.scenario);
  const ComplianceReport report =
      check_compliance(sweep, loaded.scenario.table, loaded.pass_rate);

  const fs::path dir = resolve_out_dir(opts.out_dir);
  if (opts.format != "csv") {
    io::write_file_atomic(dir / "compliance_report.json",
                          io::compliance_report_json(report));
  }
  if (opts.format != "json") {
    io::write_file_atomic(dir / "trials.csv", io::trials_csv(sweep.trials));
  }

  std::cout << "fingerprint=" << report.fingerprint << "\n";
  std::cout << "verdict=" << (report.pass ? "pass" : "fail") << "\n";
  for (const std::string& line : report.failing_points) {
    std::cout << "failing: " << line << "\n";
  }
  return report.pass ? kExitOk : kExitComplianceFail;
}

int cmd_compare(const CommonOptions& opts) {
  const io::LoadedScenario loaded = load_with_overrides(opts);
  io::LoadedComparison cmp = io::parse_comparison(loaded, opts.scenario_path);
  if (opts.no_filter) {
    cmp.unit_a.filter.reset();
    cmp.unit_b.filter.reset();
  }
  const ComparisonReport report =
      dual_comparison(cmp.profile_ft, cmp.unit_a, cmp.unit_b, cmp.max_divergence, cmp.env);

  const fs::path dir = resolve_out_dir(opts.out_dir);
  if (opts.format != "csv") {
    io::write_file_atomic(dir / "comparison_report.json",
                          io::comparison_report_json(report));
  }
  if (opts.format != "json") {
    io::write_file_atomic(dir / "comparison.csv", io::comparison_csv(report));
  }

  std::cout << "max_divergence_ft=" << io::detail::fixed(report.max_divergence_ft, 4) << "\n";
  std::cout << "ncd_disagreements=" << report.ncd_disagreements << "\n";
  std::cout << "verdict=" << (report.pass ? "pass" : "fail") << "\n";
  return report.pass ? kExitOk : kExitComplianceFail;
}

int cmd_classify(const std::string& change_path) {
  const cert::ChangeDescriptor change = io::load_change_file(change_path);
  const cert::Classification result = cert::classify_change(change);
  nlohmann::json j{{"level", cert::to_string(result.level)},
                   {"triggered_predicates", result.triggered_predicates}};
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_cia(const std::string& change_path, const std::string& matrix_path,
            const std::vector<std::string>& evidence, const std::string& format,
            const std::string& out_path) {
  const cert::ChangeDescriptor change = io::load_change_file(change_path);
  const cert::Classification classification = cert::classify_change(change);

  cert::MOCMatrix matrix = cert::default_moc_matrix();
  if (!matrix_path.empty()) {
    std::ifstream in(matrix_path);
    if (!in) throw ConfigError(matrix_path + ": cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    matrix = cert::parse_moc_matrix(buf.str());
  }

  const cert::CIADocument doc =
      cert::build_cia(change, classification, matrix, evidence);
  const auto fmt =
      format == "text" ? cert::DocumentFormat::text : cert::DocumentFormat::json;
  const std::string rendered = cert::emit_document(doc, fmt);

  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    io::write_file_atomic(out_path, rendered);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FMCW radar altimeter / 5G C-band coexistence simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version_string));

  CommonOptions sim_opts;
  double sim_altitude_ft = 100.0;
  bool sim_raw = false;
  CLI::App* simulate = app.add_subcommand("simulate", "Single-trial altitude simulation");
  add_common_flags(simulate, sim_opts);
  simulate->add_option("--altitude-ft", sim_altitude_ft, "True altitude in feet")->required();
  simulate->add_flag("--raw", sim_raw, "Also write the trial row as CSV");

  CommonOptions sweep_opts;
  CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo compliance sweep");
  add_common_flags(sweep, sweep_opts);

  CommonOptions compare_opts;
  CLI::App* compare = app.add_subcommand("compare", "Dual-altimeter descent comparison");
  add_common_flags(compare, compare_opts);

  std::string classify_path;
  CLI::App* classify = app.add_subcommand("classify", "Classify a change descriptor");
  classify->add_option("--change", classify_path, "Change descriptor file (JSON)")->required();

  std::string cia_change, cia_matrix, cia_format = "json", cia_out;
  std::vector<std::string> cia_evidence;
  CLI::App* cia = app.add_subcommand("cia", "Assemble a Change Impact Analysis document");
  cia->add_option("--change", cia_change, "Change descriptor file (JSON)")->required();
  cia->add_option("--matrix", cia_matrix, "MOC matrix file (JSON); default matrix if omitted");
  cia->add_option("--evidence", cia_evidence, "Verification evidence fingerprint (repeatable)");
  cia->add_option("--format", cia_format, "Rendering: json or text")
      ->check(CLI::IsMember({"json", "text"}));
  cia->add_option("--out", cia_out, "Write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_opts, sim_altitude_ft, sim_raw);
    if (sweep->parsed()) return cmd_sweep(sweep_opts);
    if (compare->parsed()) return cmd_compare(compare_opts);
    if (classify->parsed()) return cmd_classify(classify_path);
    if (cia->parsed()) return cmd_cia(cia_change, cia_matrix, cia_evidence, cia_format, cia_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
