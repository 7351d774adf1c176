#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = RALTSIM_CLI_PATH;
const std::string kScenarioDir = RALTSIM_SCENARIO_DIR;
const std::string kDataDir = RALTSIM_TEST_DATA_DIR;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path log =
      fs::temp_directory_path() / ("raltsim_cli_" + std::to_string(counter++) + ".log");
  const std::string cmd = kCli + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  result.output = ss.str();
  fs::remove(log);
  return result;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("raltsim_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("simulate: clean scenario at 100 ft is valid and accurate") {
  const RunResult r =
      run_cli("simulate --scenario " + kScenarioDir + "/clean_small.json --altitude-ft 100");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("validity=valid") != std::string::npos);
  CHECK(r.output.find("classification=within_tolerance") != std::string::npos);

  // Estimate within +/-3 ft of 100 ft.
  const auto pos = r.output.find("error_ft=");
  REQUIRE(pos != std::string::npos);
  const double err = std::abs(std::stod(r.output.substr(pos + 9)));
  CHECK(err <= 3.0);
}

TEST_CASE("simulate: echo disabled reports NCD with exit 2") {
  const RunResult r =
      run_cli("simulate --scenario " + kDataDir + "/echo_off.json --altitude-ft 100");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("validity=no_computed_data") != std::string::npos);
}

TEST_CASE("simulate: malformed scenario exits 1 naming the key") {
  const RunResult r =
      run_cli("simulate --scenario " + kDataDir + "/bad_unknown_key.json --altitude-ft 100");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("chrip") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli("simulate --altitude-ft 100").exit_code == 1);      // missing --scenario
  CHECK(run_cli("frobnicate").exit_code == 1);                      // unknown subcommand
  CHECK(run_cli("sweep --scenario missing.json").exit_code == 1);   // missing file
}

TEST_CASE("sweep: clean scenario passes and is byte-reproducible") {
  const fs::path dir_a = fresh_dir("sweep_a");
  const fs::path dir_b = fresh_dir("sweep_b");
  const std::string base = "sweep --scenario " + kScenarioDir + "/clean_small.json --out ";

  const RunResult a = run_cli(base + dir_a.string());
  CHECK(a.exit_code == 0);
  CHECK(a.output.find("verdict=pass") != std::string::npos);

  const RunResult b = run_cli(base + dir_b.string());
  CHECK(b.exit_code == 0);

  CHECK(read_file(dir_a / "compliance_report.json") ==
        read_file(dir_b / "compliance_report.json"));
  CHECK(read_file(dir_a / "trials.csv") == read_file(dir_b / "trials.csv"));

  const std::string report = read_file(dir_a / "compliance_report.json");
  CHECK(report.find("\"verdict\": \"pass\"") != std::string::npos);

  const std::string csv = read_file(dir_a / "trials.csv");
  CHECK(csv.rfind("altitude_ft,trial,estimate_ft,error_ft,snr_db,classification\n", 0) == 0);
}

TEST_CASE("sweep: changing the seed changes the fingerprint") {
  const fs::path dir_a = fresh_dir("seed_a");
  const fs::path dir_b = fresh_dir("seed_b");
  const std::string base = "sweep --scenario " + kScenarioDir + "/clean_small.json";
  CHECK(run_cli(base + " --seed 1 --out " + dir_a.string()).exit_code == 0);
  CHECK(run_cli(base + " --seed 2 --out " + dir_b.string()).exit_code == 0);

  auto fingerprint_of = [](const std::string& report) {
    const auto pos = report.find("\"fingerprint\": \"");
    REQUIRE(pos != std::string::npos);
    return report.substr(pos + 16, 16);
  };
  CHECK(fingerprint_of(read_file(dir_a / "compliance_report.json")) !=
        fingerprint_of(read_file(dir_b / "compliance_report.json")));
}

TEST_CASE("sweep: unfiltered spurious tone fails with exit 3, filtered passes") {
  const fs::path dir = fresh_dir("spur");
  const RunResult fail = run_cli("sweep --scenario " + kScenarioDir +
                                 "/spurious_tone_unfiltered.json --out " + dir.string());
  CHECK(fail.exit_code == 3);
  CHECK(fail.output.find("verdict=fail") != std::string::npos);

  const RunResult pass = run_cli("sweep --scenario " + kScenarioDir +
                                 "/spurious_tone_filtered.json --out " + dir.string());
  CHECK(pass.exit_code == 0);
}

TEST_CASE("sweep: --no-filter override degrades the filtered scenario") {
  const fs::path dir = fresh_dir("nofilter");
  const RunResult r = run_cli("sweep --scenario " + kScenarioDir +
                              "/spurious_tone_filtered.json --no-filter --out " +
                              dir.string());
  CHECK(r.exit_code == 3);
}

TEST_CASE("compare: clean units agree, interfered units diverge") {
  const fs::path dir = fresh_dir("compare");
  const RunResult ok = run_cli("compare --scenario " + kScenarioDir +
                               "/clean_compare.json --out " + dir.string());
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("verdict=pass") != std::string::npos);

  const RunResult diverge = run_cli("compare --scenario " + kScenarioDir +
                                    "/filter_benefit_compare.json --out " + dir.string());
  CHECK(diverge.exit_code == 3);
  CHECK(diverge.output.find("verdict=fail") != std::string::npos);

  const std::string csv = read_file(dir / "comparison.csv");
  CHECK(csv.rfind("step,altitude_ft,a_estimate_ft,b_estimate_ft,divergence_ft,"
                  "a_validity,b_validity\n", 0) == 0);
}

TEST_CASE("RALTSIM_OUT_DIR supplies the default output directory") {
  const fs::path dir = fresh_dir("envdir");
  const fs::path log = fs::temp_directory_path() / "raltsim_env.log";
  const std::string cmd = "RALTSIM_OUT_DIR=" + dir.string() + " " + kCli +
                          " sweep --scenario " + kScenarioDir +
                          "/clean_small.json > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(fs::exists(dir / "compliance_report.json"));
  CHECK(fs::exists(dir / "trials.csv"));
  fs::remove(log);
}

TEST_CASE("simulate --raw writes the trial row") {
  const fs::path dir = fresh_dir("raw");
  const RunResult r = run_cli("simulate --scenario " + kScenarioDir +
                              "/clean_small.json --altitude-ft 100 --raw --out " +
                              dir.string());
  CHECK(r.exit_code == 0);
  const std::string csv = read_file(dir / "simulate_trial.csv");
  CHECK(csv.find("within_tolerance") != std::string::npos);
}

TEST_CASE("classify: the filter change is minor") {
  const RunResult r =
      run_cli("classify --change " + kScenarioDir + "/change_filter.json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"minor\"") != std::string::npos);
}

TEST_CASE("cia: evidence-free document exits 1 naming the rows") {
  const RunResult r = run_cli("cia --change " + kScenarioDir + "/change_filter.json");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("TSO-C87") != std::string::npos);
  CHECK(r.output.find("Non-Regulatory") != std::string::npos);
}

TEST_CASE("cia: renders json and text with evidence") {
  const RunResult json_run = run_cli("cia --change " + kScenarioDir +
                                     "/change_filter.json --evidence 0123456789abcdef");
  CHECK(json_run.exit_code == 0);
  CHECK(json_run.output.find("\"declaration\"") != std::string::npos);

  const RunResult text_run =
      run_cli("cia --change " + kScenarioDir +
              "/change_filter.json --evidence 0123456789abcdef --format text");
  CHECK(text_run.exit_code == 0);
  CHECK(text_run.output.find("## Declaration of the Change") != std::string::npos);
  CHECK(text_run.output.find("## Return to Service") != std::string::npos);

  // Byte-stable across runs.
  const RunResult again = run_cli("cia --change " + kScenarioDir +
                                  "/change_filter.json --evidence 0123456789abcdef");
  CHECK(again.output == json_run.output);
}
