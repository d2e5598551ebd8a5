#pragma once

// Declarative scenarios: load a JSON scenario file, run the quantum and/or
// classical evolution on one time grid, write the observables as CSV, and
// compare the two representations against a tolerance.

#include "cpn/chart.hpp"
#include "cpn/classical_flow.hpp"
#include "cpn/core.hpp"
#include "cpn/pauli.hpp"
#include "cpn/quantum.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cpn {

/// Malformed or invalid scenario file. The message names the location (line
/// and column for syntax errors, JSON path for validation errors).
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class RunMethod { quantum, classical, both };
enum class QuantumSolver { exact, rk4 };
enum class Observable { populations, z, concurrence, energy, norm };

std::string_view to_string(RunMethod m) noexcept;
std::string_view to_string(QuantumSolver s) noexcept;
std::string_view to_string(Observable o) noexcept;
RunMethod parse_run_method(std::string_view s);
std::optional<Observable> parse_observable(std::string_view s);

inline constexpr int kCsvSchemaVersion = 1;
inline constexpr double kDefaultCompareTolerance = 1e-6;

struct ScenarioConfig {
  std::string name;
  /// Pauli-sum source text when the Hamiltonian was given that way.
  std::string hamiltonian_source;
  HermitianOperator<double> hamiltonian;
  StateVector<double> initial_state;
  TimeGrid grid;
  FlowSettings flow{};
  std::vector<Observable> observables{Observable::populations, Observable::energy,
                                      Observable::norm};
  bool renormalize_before_observables = false;
  QuantumSolver quantum_solver = QuantumSolver::exact;
  double tolerance = kDefaultCompareTolerance;

  Index dimension() const noexcept { return hamiltonian.dimension(); }
  bool wants(Observable o) const;
  /// Throws ConfigError naming the violated invariant.
  void validate() const;
};

ScenarioConfig parse_scenario(std::string_view json_text, std::string_view source = "<input>");
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Observables at one sample time for one representation. z and concurrence
/// are present only for N = 4 when requested.
struct ObservableSample {
  double time = 0.0;
  RVector<double> populations;
  std::optional<double> z;
  std::optional<double> concurrence;
  double energy = 0.0;
  double norm_drift = 0.0;
};

struct SampleRow {
  double time = 0.0;
  std::optional<ObservableSample> quantum;
  std::optional<ObservableSample> classical;
  Index pivot = -1;
  std::size_t switches_cumulative = 0;
};

using ClassicalRhs =
    std::function<CVector<double>(const HermitianOperator<double>&, const ChartPoint<double>&)>;

struct RunOptions {
  /// Replaces hamilton_rhs in the classical integrator when set.
  ClassicalRhs classical_rhs;
};

struct RunResult {
  RunMethod method = RunMethod::both;
  std::optional<QuantumTrajectory<double>> quantum;
  std::optional<ClassicalTrajectory<double>> classical;
  std::vector<SampleRow> rows;
};

RunResult run(const ScenarioConfig& config, RunMethod method, const RunOptions& options = {});

std::vector<std::string> csv_columns(const ScenarioConfig& config, RunMethod method);
void emit_csv(const ScenarioConfig& config, const RunResult& result, std::ostream& out);
void emit_csv(const ScenarioConfig& config, const RunResult& result,
              const std::filesystem::path& path);

struct ComparisonReport {
  std::string scenario;
  double tolerance = kDefaultCompareTolerance;
  /// Max absolute quantum/classical deviation per requested observable
  /// ("populations", "z", "concurrence", "energy").
  std::vector<std::pair<std::string, double>> deviations;
  double max_fidelity_gap = 0.0;
  double energy_drift_quantum = 0.0;
  double energy_drift_classical = 0.0;
  double norm_drift_quantum = 0.0;
  std::size_t chart_switches = 0;
  std::vector<double> switch_times;

  std::optional<double> deviation(std::string_view observable) const;
  /// Every observable deviation and the fidelity gap are within tolerance.
  bool passed() const;
};

ComparisonReport compare(const ScenarioConfig& config, const RunOptions& options = {});
ComparisonReport compare(const ScenarioConfig& config, double tolerance,
                         const RunOptions& options = {});

std::string report_json(const ComparisonReport& report);
void print_report(const ComparisonReport& report, std::ostream& out);

}  // namespace cpn
