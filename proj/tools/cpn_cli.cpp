// cpn: run and compare quantum/classical evolutions of scenario files.
//
//   cpn simulate --config s.json --method both --out s.csv
//   cpn compare  --config s.json [--tolerance 1e-6] [--report r.json]
//   cpn validate --config s.json
//
// Exit codes: 0 success, 1 tolerance breach, 2 config error, 3 numeric failure.

#include "cpn/scenario.hpp"
#include "cpn/version.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

enum ExitCode : int { kOk = 0, kToleranceBreach = 1, kConfigError = 2, kNumericFailure = 3 };

int simulate(const std::string& config_path, const std::string& method_name,
             const std::string& out_path) {
  const auto cfg = cpn::load_scenario(config_path);
  const auto method = cpn::parse_run_method(method_name);
  const auto result = cpn::run(cfg, method);
  if (out_path.empty() || out_path == "-") {
    cpn::emit_csv(cfg, result, std::cout);
  } else {
    cpn::emit_csv(cfg, result, std::filesystem::path(out_path));
  }
  if (result.classical) {
    std::cerr << cfg.name << ": " << result.rows.size() << " samples, "
              << result.classical->switch_count() << " chart switches\n";
  }
  return kOk;
}

int compare(const std::string& config_path, std::optional<double> tolerance,
            const std::string& report_path) {
  const auto cfg = cpn::load_scenario(config_path);
  const auto report = tolerance ? cpn::compare(cfg, *tolerance) : cpn::compare(cfg);
  cpn::print_report(report, std::cout);
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw cpn::Error("cannot write report to " + report_path);
    out << cpn::report_json(report);
  }
  return report.passed() ? kOk : kToleranceBreach;
}

int validate(const std::string& config_path) {
  const auto cfg = cpn::load_scenario(config_path);
  std::cout << cfg.name << ": ok (N = " << cfg.dimension() << ", " << cfg.grid.steps()
            << " steps)\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum dynamics as classical Hamiltonian flow on CP^{N-1}"};
  app.set_version_flag("--version", std::string("cpn ") + cpn::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string method = "both";
  std::string out_path;
  std::optional<double> tolerance;
  std::string report_path;

  auto* sim = app.add_subcommand("simulate", "Integrate a scenario and write CSV");
  sim->add_option("--config", config_path, "Scenario file (JSON)")->required();
  sim->add_option("--method", method, "quantum | classical | both")
      ->check(CLI::IsMember({"quantum", "classical", "both"}));
  sim->add_option("--out", out_path, "Output CSV path ('-' for stdout)");

  auto* cmp = app.add_subcommand("compare", "Compare quantum and classical evolutions");
  cmp->add_option("--config", config_path, "Scenario file (JSON)")->required();
  cmp->add_option("--tolerance", tolerance, "Max allowed deviation (default: scenario, 1e-6)");
  cmp->add_option("--report", report_path, "Write the report as JSON");

  auto* val = app.add_subcommand("validate", "Load and validate a scenario");
  val->add_option("--config", config_path, "Scenario file (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*sim) return simulate(config_path, method, out_path);
    if (*cmp) return compare(config_path, tolerance, report_path);
    if (*val) return validate(config_path);
  } catch (const cpn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const cpn::ValidationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const cpn::Error& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
  return kOk;
}
