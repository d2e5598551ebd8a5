#include "cpn/scenario.hpp"

#include "cpn/observables.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace cpn {

using json = nlohmann::json;

// ------------------------------------------------------------------ names

std::string_view to_string(RunMethod m) noexcept {
  switch (m) {
    case RunMethod::quantum: return "quantum";
    case RunMethod::classical: return "classical";
    case RunMethod::both: return "both";
  }
  return "?";
}

std::string_view to_string(QuantumSolver s) noexcept {
  switch (s) {
    case QuantumSolver::exact: return "exact";
    case QuantumSolver::rk4: return "rk4";
  }
  return "?";
}

std::string_view to_string(Observable o) noexcept {
  switch (o) {
    case Observable::populations: return "populations";
    case Observable::z: return "z";
    case Observable::concurrence: return "concurrence";
    case Observable::energy: return "energy";
    case Observable::norm: return "norm";
  }
  return "?";
}

RunMethod parse_run_method(std::string_view s) {
  if (s == "quantum") return RunMethod::quantum;
  if (s == "classical") return RunMethod::classical;
  if (s == "both") return RunMethod::both;
  throw ConfigError("unknown method '" + std::string(s) + "' (quantum|classical|both)");
}

std::optional<Observable> parse_observable(std::string_view s) {
  for (auto o : {Observable::populations, Observable::z, Observable::concurrence,
                 Observable::energy, Observable::norm}) {
    if (to_string(o) == s) return o;
  }
  return std::nullopt;
}

bool ScenarioConfig::wants(Observable o) const {
  return std::find(observables.begin(), observables.end(), o) != observables.end();
}

void ScenarioConfig::validate() const {
  const Index n = hamiltonian.dimension();
  if (initial_state.dimension() != n) {
    throw ConfigError("initial_state has " + std::to_string(initial_state.dimension()) +
                      " amplitudes but the Hamiltonian has dimension " + std::to_string(n));
  }
  if ((wants(Observable::z) || wants(Observable::concurrence)) && n != 4) {
    throw ConfigError("observables 'z' and 'concurrence' require N = 4 (got N = " +
                      std::to_string(n) + ")");
  }
  if (!(std::isfinite(tolerance) && tolerance > 0.0)) {
    throw ConfigError("tolerance must be finite and positive");
  }
  try {
    grid.validate();
    flow.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
}

// ---------------------------------------------------------------- loading

namespace {

constexpr double kStateNormTolerance = 1e-9;
constexpr double kDenseHermitianTolerance = 1e-9;

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

class Loader {
 public:
  Loader(const json& root, std::string source) : root_(root), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ConfigError(source_ + ": " + path + ": " + what);
  }

  void require_object(const json& j, const std::string& path) const {
    if (!j.is_object()) fail(path, "expected an object");
  }

  void reject_unknown(const json& j, const std::string& path,
                      std::initializer_list<std::string_view> allowed) const {
    for (const auto& [key, value] : j.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(path + "." + key, "unknown key");
      }
    }
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
  }

  std::vector<double> numbers(const json& j, const std::string& path) const {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  std::vector<std::vector<double>> rows(const json& j, const std::string& path) const {
    if (!j.is_array()) fail(path, "expected an array of rows");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      out.push_back(numbers(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  ScenarioConfig load() const {
    require_object(root_, "$");
    reject_unknown(root_, "$",
                   {"name", "hamiltonian", "initial_state", "grid", "flow", "observables",
                    "renormalize_before_observables", "quantum_solver", "tolerance",
                    "max_qubits"});

    std::string name = "scenario";
    if (root_.contains("name")) {
      if (!root_["name"].is_string()) fail("$.name", "expected a string");
      name = root_["name"].get<std::string>();
    }

    std::size_t max_qubits = kDefaultMaxQubits;
    if (root_.contains("max_qubits")) {
      const auto& m = root_["max_qubits"];
      if (!m.is_number_unsigned() || m.get<std::size_t>() == 0 || m.get<std::size_t>() > 30) {
        fail("$.max_qubits", "expected an integer in [1, 30]");
      }
      max_qubits = m.get<std::size_t>();
    }

    if (!root_.contains("hamiltonian")) fail("$", "missing required key 'hamiltonian'");
    std::string source_text;
    HermitianOperator<double> h = hamiltonian(root_["hamiltonian"], max_qubits, source_text);

    if (!root_.contains("initial_state")) fail("$", "missing required key 'initial_state'");
    StateVector<double> psi0 = state(root_["initial_state"]);
    if (psi0.dimension() != h.dimension()) {
      fail("$.initial_state", std::to_string(psi0.dimension()) +
                                  " amplitudes but the Hamiltonian has dimension " +
                                  std::to_string(h.dimension()));
    }

    if (!root_.contains("grid")) fail("$", "missing required key 'grid'");
    TimeGrid g = grid(root_["grid"]);

    ScenarioConfig cfg{.name = std::move(name),
                       .hamiltonian_source = std::move(source_text),
                       .hamiltonian = std::move(h),
                       .initial_state = std::move(psi0),
                       .grid = g};

    if (root_.contains("flow")) cfg.flow = flow(root_["flow"]);
    if (root_.contains("observables")) cfg.observables = observables(root_["observables"]);
    if (root_.contains("renormalize_before_observables")) {
      const auto& r = root_["renormalize_before_observables"];
      if (!r.is_boolean()) fail("$.renormalize_before_observables", "expected a boolean");
      cfg.renormalize_before_observables = r.get<bool>();
    }
    if (root_.contains("quantum_solver")) {
      const auto& s = root_["quantum_solver"];
      if (s == "exact") {
        cfg.quantum_solver = QuantumSolver::exact;
      } else if (s == "rk4") {
        cfg.quantum_solver = QuantumSolver::rk4;
      } else {
        fail("$.quantum_solver", "expected \"exact\" or \"rk4\"");
      }
    }
    if (root_.contains("tolerance")) {
      cfg.tolerance = number(root_["tolerance"], "$.tolerance");
      if (!(cfg.tolerance > 0.0)) fail("$.tolerance", "must be positive");
    }

    try {
      cfg.validate();
    } catch (const ConfigError& e) {
      fail("$", e.what());
    }
    return cfg;
  }

 private:
  HermitianOperator<double> hamiltonian(const json& j, std::size_t max_qubits,
                                        std::string& source_text) const {
    const std::string path = "$.hamiltonian";
    require_object(j, path);
    const int forms = int(j.contains("pauli")) + int(j.contains("two_qubit")) +
                      int(j.contains("real") || j.contains("imag"));
    if (forms != 1) {
      fail(path, "specify exactly one of 'pauli', 'two_qubit', or 'real'/'imag'");
    }

    if (j.contains("pauli")) {
      reject_unknown(j, path, {"pauli"});
      if (!j["pauli"].is_string()) fail(path + ".pauli", "expected a string");
      source_text = j["pauli"].get<std::string>();
      try {
        return build_hamiltonian<double>(parse_hamiltonian(source_text), max_qubits);
      } catch (const Error& e) {
        fail(path + ".pauli", e.what());
      }
    }

    if (j.contains("two_qubit")) {
      reject_unknown(j, path, {"two_qubit"});
      const auto& c = j["two_qubit"];
      require_object(c, path + ".two_qubit");
      reject_unknown(c, path + ".two_qubit", {"c1", "c2", "c3", "c4", "c5"});
      auto get = [&](const char* key) {
        return c.contains(key) ? number(c[key], path + ".two_qubit." + key) : 0.0;
      };
      const TwoQubitCouplings couplings{get("c1"), get("c2"), get("c3"), get("c4"), get("c5")};
      source_text = format_hamiltonian(two_qubit_terms(couplings));
      return build_two_qubit_hamiltonian<double>(couplings);
    }

    reject_unknown(j, path, {"real", "imag"});
    if (!j.contains("real")) fail(path, "dense form requires 'real'");
    const auto re = rows(j["real"], path + ".real");
    const auto n = re.size();
    std::vector<std::vector<double>> im(n, std::vector<double>(n, 0.0));
    if (j.contains("imag")) im = rows(j["imag"], path + ".imag");
    if (n < 2) fail(path + ".real", "dimension must be at least 2");
    if (im.size() != n) fail(path + ".imag", "row count differs from 'real'");
    CMatrix<double> m(static_cast<Index>(n), static_cast<Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
      if (re[r].size() != n) fail(path + ".real[" + std::to_string(r) + "]", "matrix is not square");
      if (im[r].size() != n) fail(path + ".imag[" + std::to_string(r) + "]", "matrix is not square");
      for (std::size_t c = 0; c < n; ++c) m(Index(r), Index(c)) = {re[r][c], im[r][c]};
    }
    try {
      return HermitianOperator<double>(m, kDenseHermitianTolerance);
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }

  StateVector<double> state(const json& j) const {
    const std::string path = "$.initial_state";
    require_object(j, path);
    reject_unknown(j, path, {"real", "imag"});
    if (!j.contains("real")) fail(path, "missing required key 'real'");
    const auto re = numbers(j["real"], path + ".real");
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("imag")) im = numbers(j["imag"], path + ".imag");
    if (im.size() != re.size()) fail(path + ".imag", "length differs from 'real'");
    CVector<double> v(Index(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i) v(Index(i)) = {re[i], im[i]};
    try {
      return StateVector<double>(v, kStateNormTolerance);
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }

  TimeGrid grid(const json& j) const {
    const std::string path = "$.grid";
    require_object(j, path);
    reject_unknown(j, path, {"t_end", "dt", "output_stride"});
    if (!j.contains("t_end")) fail(path, "missing required key 't_end'");
    if (!j.contains("dt")) fail(path, "missing required key 'dt'");
    TimeGrid g;
    g.t_end = number(j["t_end"], path + ".t_end");
    g.dt = number(j["dt"], path + ".dt");
    if (j.contains("output_stride")) {
      const auto& s = j["output_stride"];
      if (!s.is_number_unsigned() || s.get<std::size_t>() == 0) {
        fail(path + ".output_stride", "expected a positive integer");
      }
      g.output_stride = s.get<std::size_t>();
    }
    try {
      g.validate();
    } catch (const Error& e) {
      fail(path, e.what());
    }
    return g;
  }

  FlowSettings flow(const json& j) const {
    const std::string path = "$.flow";
    require_object(j, path);
    reject_unknown(j, path, {"switch_threshold", "pivot_floor", "method"});
    FlowSettings f;
    if (j.contains("switch_threshold")) {
      f.switch_threshold = number(j["switch_threshold"], path + ".switch_threshold");
    }
    if (j.contains("pivot_floor")) f.pivot_floor = number(j["pivot_floor"], path + ".pivot_floor");
    if (j.contains("method") && j["method"] != "rk4") {
      fail(path + ".method", "only \"rk4\" is supported");
    }
    try {
      f.validate();
    } catch (const Error& e) {
      fail(path, e.what());
    }
    return f;
  }

  std::vector<Observable> observables(const json& j) const {
    const std::string path = "$.observables";
    if (!j.is_array()) fail(path, "expected an array of names");
    std::vector<Observable> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string p = path + "[" + std::to_string(i) + "]";
      if (!j[i].is_string()) fail(p, "expected a string");
      const auto o = parse_observable(j[i].get<std::string>());
      if (!o) fail(p, "unknown observable '" + j[i].get<std::string>() + "'");
      if (std::find(out.begin(), out.end(), *o) == out.end()) out.push_back(*o);
    }
    return out;
  }

  const json& root_;
  std::string source_;
};

}  // namespace

ScenarioConfig parse_scenario(std::string_view json_text, std::string_view source) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(source) + ": syntax error at " +
                      line_col(json_text, e.byte) + ": " + e.what());
  }
  return Loader(root, std::string(source)).load();
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

// ------------------------------------------------------------------- runs

namespace {

ObservableSample quantum_sample(const ScenarioConfig& cfg, double t, const CVector<double>& raw,
                                double norm_drift) {
  const CVector<double> psi = cfg.renormalize_before_observables ? CVector<double>(raw.normalized())
                                                                 : raw;
  ObservableSample s;
  s.time = t;
  s.populations = populations_quantum(psi);
  if (cfg.wants(Observable::z)) s.z = quaternionic_z_quantum(psi);
  if (cfg.wants(Observable::concurrence)) s.concurrence = concurrence_quantum(psi);
  s.energy = energy(cfg.hamiltonian, psi);
  s.norm_drift = norm_drift;
  return s;
}

ObservableSample classical_sample(const ScenarioConfig& cfg, double t,
                                  const ChartPoint<double>& p) {
  ObservableSample s;
  s.time = t;
  s.populations = populations_classical(p);
  if (cfg.wants(Observable::z)) s.z = quaternionic_z_classical(p);
  if (cfg.wants(Observable::concurrence)) s.concurrence = concurrence_classical(p);
  s.energy = energy(cfg.hamiltonian, p);
  return s;
}

}  // namespace

RunResult run(const ScenarioConfig& config, RunMethod method, const RunOptions& options) {
  config.validate();
  RunResult result;
  result.method = method;
  const bool want_q = method != RunMethod::classical;
  const bool want_c = method != RunMethod::quantum;

  if (want_q) {
    result.quantum = config.quantum_solver == QuantumSolver::exact
                         ? evolve_exact(config.hamiltonian, config.initial_state, config.grid)
                         : evolve_rk4(config.hamiltonian, config.initial_state, config.grid);
  }
  if (want_c) {
    const auto& psi0 = config.initial_state;
    const auto point0 =
        to_chart(psi0, select_pivot(psi0), config.flow.pivot_floor);
    result.classical = options.classical_rhs
                           ? integrate_classical(config.hamiltonian, point0, config.grid,
                                                 config.flow, options.classical_rhs)
                           : integrate_classical(config.hamiltonian, point0, config.grid,
                                                 config.flow);
  }

  const std::size_t count = want_q ? result.quantum->size() : result.classical->size();
  result.rows.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    SampleRow& row = result.rows[i];
    if (want_q) {
      const auto& q = *result.quantum;
      row.time = q.times[i];
      row.quantum = quantum_sample(config, q.times[i], q.states[i], q.norm_drift[i]);
    }
    if (want_c) {
      const auto& c = *result.classical;
      row.time = c.times[i];
      row.classical = classical_sample(config, c.times[i], c.points[i]);
      row.pivot = c.points[i].pivot();
      row.switches_cumulative = c.switches_cumulative[i];
    }
  }
  return result;
}

// -------------------------------------------------------------------- csv

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

std::vector<std::string> csv_columns(const ScenarioConfig& config, RunMethod method) {
  const bool q = method != RunMethod::classical;
  const bool c = method != RunMethod::quantum;
  const Index n = config.dimension();
  std::vector<std::string> cols{"t"};
  auto pair = [&](const std::string& base) {
    if (q) cols.push_back(base + "_q");
    if (c) cols.push_back(base + "_c");
  };
  if (config.wants(Observable::populations)) {
    for (const char* suffix : {"_q", "_c"}) {
      if ((suffix[1] == 'q' && !q) || (suffix[1] == 'c' && !c)) continue;
      for (Index k = 0; k < n; ++k) cols.push_back("p" + std::to_string(k) + suffix);
    }
  }
  if (config.wants(Observable::z)) pair("z");
  if (config.wants(Observable::concurrence)) pair("C");
  if (config.wants(Observable::energy)) pair("E");
  if (config.wants(Observable::norm) && q) cols.push_back("norm_drift_q");
  if (c) {
    cols.push_back("pivot");
    cols.push_back("n_switches_cum");
  }
  return cols;
}

void emit_csv(const ScenarioConfig& config, const RunResult& result, std::ostream& out) {
  const bool q = result.method != RunMethod::classical;
  const bool c = result.method != RunMethod::quantum;
  out << "# schema=" << kCsvSchemaVersion << '\n';
  const auto cols = csv_columns(config, result.method);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';

  for (const auto& row : result.rows) {
    std::vector<std::string> f{fmt(row.time)};
    auto pair = [&](auto get) {
      if (q) f.push_back(fmt(get(*row.quantum)));
      if (c) f.push_back(fmt(get(*row.classical)));
    };
    if (config.wants(Observable::populations)) {
      if (q) {
        for (Index k = 0; k < row.quantum->populations.size(); ++k) {
          f.push_back(fmt(row.quantum->populations(k)));
        }
      }
      if (c) {
        for (Index k = 0; k < row.classical->populations.size(); ++k) {
          f.push_back(fmt(row.classical->populations(k)));
        }
      }
    }
    if (config.wants(Observable::z)) pair([](const ObservableSample& s) { return *s.z; });
    if (config.wants(Observable::concurrence)) {
      pair([](const ObservableSample& s) { return *s.concurrence; });
    }
    if (config.wants(Observable::energy)) {
      pair([](const ObservableSample& s) { return s.energy; });
    }
    if (config.wants(Observable::norm) && q) f.push_back(fmt(row.quantum->norm_drift));
    if (c) {
      f.push_back(std::to_string(row.pivot));
      f.push_back(std::to_string(row.switches_cumulative));
    }
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
    out << '\n';
  }
}

void emit_csv(const ScenarioConfig& config, const RunResult& result,
              const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("emit_csv: cannot open " + path.string() + " for writing");
  emit_csv(config, result, out);
  out.flush();
  if (!out) throw Error("emit_csv: write to " + path.string() + " failed");
}

// ---------------------------------------------------------------- compare

std::optional<double> ComparisonReport::deviation(std::string_view observable) const {
  for (const auto& [name, value] : deviations) {
    if (name == observable) return value;
  }
  return std::nullopt;
}

bool ComparisonReport::passed() const {
  if (!(max_fidelity_gap <= tolerance)) return false;
  return std::all_of(deviations.begin(), deviations.end(),
                     [&](const auto& d) { return d.second <= tolerance; });
}

ComparisonReport compare(const ScenarioConfig& config, const RunOptions& options) {
  return compare(config, config.tolerance, options);
}

ComparisonReport compare(const ScenarioConfig& config, double tolerance,
                         const RunOptions& options) {
  if (!(std::isfinite(tolerance) && tolerance > 0.0)) {
    throw ConfigError("compare: tolerance must be finite and positive");
  }
  const RunResult r = run(config, RunMethod::both, options);

  ComparisonReport rep;
  rep.scenario = config.name;
  rep.tolerance = tolerance;

  double dev_pop = 0.0;
  double dev_z = 0.0;
  double dev_c = 0.0;
  double dev_e = 0.0;
  const double e0_q = r.rows.front().quantum->energy;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& qs = *r.rows[i].quantum;
    const auto& cs = *r.rows[i].classical;
    dev_pop = std::max(dev_pop, (qs.populations - cs.populations).cwiseAbs().maxCoeff());
    if (qs.z) dev_z = std::max(dev_z, std::abs(*qs.z - *cs.z));
    if (qs.concurrence) dev_c = std::max(dev_c, std::abs(*qs.concurrence - *cs.concurrence));
    dev_e = std::max(dev_e, std::abs(qs.energy - cs.energy));
    rep.energy_drift_quantum = std::max(rep.energy_drift_quantum, std::abs(qs.energy - e0_q));

    const CVector<double> psi_q = r.quantum->states[i].normalized();
    const CVector<double> psi_c = from_chart(r.classical->points[i]).amplitudes();
    rep.max_fidelity_gap = std::max(rep.max_fidelity_gap, fidelity_gap<double>(psi_q, psi_c));
  }
  // A fidelity gap can round to a tiny negative value.
  rep.max_fidelity_gap = std::max(rep.max_fidelity_gap, 0.0);

  if (config.wants(Observable::populations)) rep.deviations.emplace_back("populations", dev_pop);
  if (config.wants(Observable::z)) rep.deviations.emplace_back("z", dev_z);
  if (config.wants(Observable::concurrence)) rep.deviations.emplace_back("concurrence", dev_c);
  if (config.wants(Observable::energy)) rep.deviations.emplace_back("energy", dev_e);

  rep.energy_drift_classical = r.classical->max_energy_drift();
  rep.norm_drift_quantum = r.quantum->max_norm_drift();
  rep.chart_switches = r.classical->switch_count();
  rep.switch_times = r.classical->switch_times;
  return rep;
}

std::string report_json(const ComparisonReport& report) {
  json j;
  j["scenario"] = report.scenario;
  j["tolerance"] = report.tolerance;
  j["passed"] = report.passed();
  json dev = json::object();
  for (const auto& [name, value] : report.deviations) dev[name] = value;
  j["max_abs_deviation"] = dev;
  j["max_fidelity_gap"] = report.max_fidelity_gap;
  j["energy_drift"] = {{"quantum", report.energy_drift_quantum},
                       {"classical", report.energy_drift_classical}};
  j["norm_drift_quantum"] = report.norm_drift_quantum;
  j["chart_switches"] = {{"count", report.chart_switches}, {"times", report.switch_times}};
  return j.dump(2) + "\n";
}

void print_report(const ComparisonReport& report, std::ostream& out) {
  const auto flags = out.flags();
  out << "scenario        " << report.scenario << '\n'
      << std::scientific << std::setprecision(3);
  for (const auto& [name, value] : report.deviations) {
    out << "  " << std::left << std::setw(14) << name << value
        << (value <= report.tolerance ? "" : "  EXCEEDS") << '\n';
  }
  out << "  " << std::setw(14) << "fidelity gap" << report.max_fidelity_gap
      << (report.max_fidelity_gap <= report.tolerance ? "" : "  EXCEEDS") << '\n'
      << "energy drift    quantum " << report.energy_drift_quantum << ", classical "
      << report.energy_drift_classical << '\n'
      << "norm drift      " << report.norm_drift_quantum << '\n'
      << "chart switches  " << report.chart_switches << '\n'
      << "tolerance       " << report.tolerance << "  "
      << (report.passed() ? "PASS" : "FAIL") << '\n';
  out.flags(flags);
}

}  // namespace cpn
