// Command-line front end for the superadiabatic gate simulator.
//
// Subcommands: rotate, controlled, cost-sweep, qsl, circuit.
// Units on every interface: energies in hbar*omega, time as the
// dimensionless product tau*omega. Exit codes: 0 success, 2 usage or
// input-format error, 3 numerical failure, 4 speed-limit bound violation.

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sagate/circuit.hpp"
#include "sagate/evolve.hpp"
#include "sagate/hamiltonian.hpp"
#include "sagate/metrics.hpp"
#include "sagate/qcore.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace sagate;

constexpr double pi = std::numbers::pi;

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output path '" + path + "'");
  out << content;
  if (!out) throw std::invalid_argument("failed writing output path '" + path + "'");
}

BlochAxis parse_axis(const std::string& text) {
  std::stringstream in(text);
  double x = 0, y = 0, z = 0;
  char c1 = 0, c2 = 0;
  if (!(in >> x >> c1 >> y >> c2 >> z) || c1 != ',' || c2 != ',') {
    throw std::invalid_argument("--axis expects three comma-separated numbers");
  }
  return BlochAxis::normalized(x, y, z);
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    try {
      values.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw std::invalid_argument(flag + ": cannot parse '" + token + "'");
    }
  }
  if (values.empty()) throw std::invalid_argument(flag + ": empty list");
  return values;
}

DriveMode parse_mode(const std::string& mode) {
  if (mode == "adiabatic") return DriveMode::adiabatic;
  if (mode == "superadiabatic") return DriveMode::superadiabatic;
  throw std::invalid_argument("--mode must be 'adiabatic' or 'superadiabatic'");
}

int default_jobs() {
  if (const char* env = std::getenv("SAGATE_JOBS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      return 1;
    }
  }
  return 1;
}

struct GateFlags {
  std::string axis = "0,0,1";
  double phi = 0.0;
  double theta0 = pi;
  double omega = 1.0;
  double tau = 1.0;
  int controls = 0;
  int steps = 4000;
  std::string mode = "superadiabatic";
  std::uint64_t seed = 1;
  std::string out;
};

void add_gate_flags(CLI::App* cmd, GateFlags& flags, bool with_controls) {
  cmd->add_option("--axis", flags.axis, "rotation axis x,y,z (normalized)");
  cmd->add_option("--phi", flags.phi, "rotation angle in radians")->required();
  cmd->add_option("--theta0", flags.theta0, "interpolation angle in (0, pi]");
  cmd->add_option("--omega", flags.omega, "energy scale, rad/time");
  cmd->add_option("--tau", flags.tau, "total evolution time");
  cmd->add_option("--steps", flags.steps, "integrator slices");
  cmd->add_option("--mode", flags.mode, "adiabatic | superadiabatic");
  cmd->add_option("--seed", flags.seed, "measurement seed");
  cmd->add_option("--out", flags.out, "output path (default stdout)");
  if (with_controls) {
    cmd->add_option("--controls", flags.controls, "number of control qubits")->required();
  }
}

json qsl_to_json(const QSLReport& r) {
  return json{{"bures", r.bures},
              {"e_tau", r.e_tau},
              {"ml_bound_time", r.ml_bound_time},
              {"eta", r.eta},
              {"eta1", r.eta1},
              {"eta2", r.eta2},
              {"eta3", r.eta3},
              {"chi", r.chi},
              {"chi_floor", r.chi_floor},
              {"slack", r.slack}};
}

json cost_to_json(const CostReport& r) {
  return json{{"sigma_numeric", r.sigma_numeric},
              {"sigma_closed", r.sigma_closed},
              {"sigma_adiabatic", r.sigma_adiabatic},
              {"sigma_controlled", r.sigma_controlled},
              {"tau", r.tau},
              {"theta0", r.theta0},
              {"omega", r.omega}};
}

int cmd_gate_run(const GateFlags& flags, const std::string& command) {
  const DriveMode mode = parse_mode(flags.mode);
  const BlochAxis axis = parse_axis(flags.axis);
  const GateSpec spec(axis, flags.phi, flags.controls, flags.theta0, flags.omega,
                      flags.tau);

  std::vector<int> targets(spec.controls + 1);
  for (int i = 0; i <= spec.controls; ++i) targets[i] = i;
  const QuantumState input = QuantumState::computational_basis(spec.system_dim(), 0);
  const GateOutcome outcome =
      apply_gate(input, spec, targets, mode, spec.tau, flags.steps, false, flags.seed);

  PiecewiseControlledHamiltonian h_run = controlled_cae(spec);
  if (mode == DriveMode::superadiabatic) h_run = superadiabatic(h_run, spec);
  const QSLReport qsl = qsl_report(outcome.evolution, h_run, spectral_path(spec), spec.tau);
  const CostReport cost = cost_report(spec);

  json doc{{"command", command},
           {"mode", flags.mode},
           {"axis", {axis.x, axis.y, axis.z}},
           {"phi", spec.phi},
           {"controls", spec.controls},
           {"theta0", spec.theta0},
           {"omega", spec.omega},
           {"tau", spec.tau},
           {"tau_omega", spec.tau * spec.omega},
           {"steps", flags.steps},
           {"seed", flags.seed},
           {"fidelity", outcome.target_fidelity},
           {"success_probability", outcome.success_probability},
           {"ancilla_outcome", outcome.ancilla_outcome}};
  if (outcome.infidelity_warning) {
    doc["warning"] = "adiabatic infidelity " + fmt12(*outcome.infidelity_warning) +
                     " at tau*omega = " + fmt12(spec.tau * spec.omega);
  }
  doc["cost"] = cost_to_json(cost);
  doc["qsl"] = qsl_to_json(qsl);
  write_text(flags.out, doc.dump(2) + "\n");
  return 0;
}

struct SweepFlags {
  std::string theta0_list = "0.785398163397,1.570796326795,2.35619449019,3.14159265359";
  std::string tau_omega_list = "0.1,0.5,1,5,20";
  double phi = pi;
  int controls = 0;
  std::string mode = "superadiabatic";
  int samples = 128;
  int jobs = default_jobs();
  std::string out;
  std::string format = "csv";
};

int cmd_cost_sweep(const SweepFlags& flags) {
  const DriveMode mode = parse_mode(flags.mode);
  const auto theta0s = parse_list(flags.theta0_list, "--theta0-list");
  const auto tau_omegas = parse_list(flags.tau_omega_list, "--tau-omega-list");
  if (flags.format != "csv" && flags.format != "json") {
    throw std::invalid_argument("--format must be 'csv' or 'json'");
  }
  if (flags.samples < 64) throw std::invalid_argument("--samples must be >= 64");

  struct Row {
    double theta0, tau_omega, sigma_numeric, sigma_closed, sigma_controlled;
  };
  std::vector<Row> rows(theta0s.size() * tau_omegas.size());
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  const auto worker = [&] {
    for (std::size_t i = cursor.fetch_add(1); i < rows.size(); i = cursor.fetch_add(1)) {
      if (failed.load()) return;
      try {
        const double theta0 = theta0s[i / tau_omegas.size()];
        const double tau_omega = tau_omegas[i % tau_omegas.size()];
        const GateSpec spec(BlochAxis(0, 0, 1), flags.phi, flags.controls, theta0, 1.0,
                            tau_omega);
        PiecewiseControlledHamiltonian h = controlled_cae(spec);
        if (mode == DriveMode::superadiabatic) h = superadiabatic(h, spec);
        const double closed = energy_cost_closed(theta0, 1.0, tau_omega);
        rows[i] = Row{theta0, tau_omega, energy_cost_numeric(h, tau_omega, flags.samples),
                      closed, std::sqrt(2.0) * closed};
      } catch (...) {
        failed.store(true);
        throw;
      }
    }
  };
  const int jobs = std::max(1, flags.jobs);
  if (jobs == 1) {
    worker();
  } else {
    // Deterministic output order regardless of completion order: rows are
    // written by index once every worker has joined.
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int j = 0; j < jobs; ++j) {
      pool.emplace_back([&] {
        try {
          worker();
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  std::string text;
  if (flags.format == "csv") {
    text = "theta0,tau_omega,sigma_numeric,sigma_closed,sigma_controlled\n";
    for (const Row& r : rows) {
      text += fmt12(r.theta0) + "," + fmt12(r.tau_omega) + "," + fmt12(r.sigma_numeric) +
              "," + fmt12(r.sigma_closed) + "," + fmt12(r.sigma_controlled) + "\n";
    }
  } else {
    json doc = json::array();
    for (const Row& r : rows) {
      doc.push_back(json{{"theta0", r.theta0},
                         {"tau_omega", r.tau_omega},
                         {"sigma_numeric", r.sigma_numeric},
                         {"sigma_closed", r.sigma_closed},
                         {"sigma_controlled", r.sigma_controlled}});
    }
    text = doc.dump(2) + "\n";
  }
  write_text(flags.out, text);
  return 0;
}

int cmd_qsl(const GateFlags& flags, int octaves) {
  const DriveMode mode = parse_mode(flags.mode);
  const BlochAxis axis = parse_axis(flags.axis);
  if (octaves < 0) throw std::invalid_argument("--tau-octaves must be >= 0");

  std::string text = "tau_omega,bures,e_tau,bound_time,slack,chi,chi_floor\n";
  double tau = flags.tau;
  for (int octave = 0; octave <= octaves; ++octave, tau *= 0.5) {
    const GateSpec spec(axis, flags.phi, flags.controls, flags.theta0, flags.omega, tau);
    PiecewiseControlledHamiltonian h = controlled_cae(spec);
    if (mode == DriveMode::superadiabatic) h = superadiabatic(h, spec);
    const SpectralPath path = spectral_path(spec);

    Vector start = Vector::Zero(spec.composite_dim());
    start(0) = 1.0;
    const EvolutionResult result = propagate(h, QuantumState(start), tau, flags.steps);
    QSLReport report;
    try {
      report = qsl_report(result, h, path, tau);
    } catch (const BoundViolation& e) {
      std::cerr << "bound violation at tau*omega = " << fmt12(tau * spec.omega) << ": "
                << e.what() << "\n";
      throw;
    }
    text += fmt12(tau * spec.omega) + "," + fmt12(report.bures) + "," +
            fmt12(report.e_tau) + "," + fmt12(report.ml_bound_time) + "," +
            fmt12(report.slack) + "," + fmt12(report.chi) + "," +
            fmt12(report.chi_floor) + "\n";
  }
  write_text(flags.out, text);
  return 0;
}

struct CircuitFlags {
  std::string path;
  std::string mode = "superadiabatic";
  int steps = 4000;
  double tau_omega = 1.0;
  std::string input;
  std::string out;
};

int cmd_circuit(const CircuitFlags& flags) {
  const DriveMode mode = parse_mode(flags.mode);
  const CircuitProgram program = parse_circuit_file(flags.path);

  QuantumState input = QuantumState::computational_basis(1 << program.qubit_count, 0);
  if (!flags.input.empty()) {
    if (static_cast<int>(flags.input.size()) != program.qubit_count) {
      throw std::invalid_argument("--input must have one bit per qubit");
    }
    int index = 0;
    for (char c : flags.input) {
      if (c != '0' && c != '1') {
        throw std::invalid_argument("--input must be a bitstring of 0s and 1s");
      }
      index = index * 2 + (c - '0');
    }
    input = QuantumState::computational_basis(1 << program.qubit_count, index);
  }

  const CircuitRun run = run_circuit(program, input, mode, flags.tau_omega, flags.steps);

  json doc{{"qubits", program.qubit_count},
           {"seed", program.seed},
           {"mode", flags.mode},
           {"steps", flags.steps},
           {"tau_omega_default", flags.tau_omega}};
  json amplitudes = json::array();
  for (int i = 0; i < run.final_state.dim(); ++i) {
    const Complex a = run.final_state.amplitude(i);
    amplitudes.push_back(json::array({a.real(), a.imag()}));
  }
  doc["final_amplitudes"] = amplitudes;
  json gates = json::array();
  for (std::size_t g = 0; g < run.outcomes.size(); ++g) {
    json entry{{"index", g}};
    if (program.gates[g].name) entry["name"] = *program.gates[g].name;
    entry["targets"] = program.gates[g].targets;
    entry["outcome"] = run.outcomes[g].ancilla_outcome;
    entry["probability"] = run.outcomes[g].success_probability;
    entry["sigma"] = run.gate_costs[g];
    if (run.outcomes[g].infidelity_warning) {
      entry["infidelity_warning"] = *run.outcomes[g].infidelity_warning;
    }
    gates.push_back(entry);
  }
  doc["gates"] = gates;
  doc["total_sigma"] = run.total_cost;
  write_text(flags.out, doc.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"superadiabatic controlled-evolution gate simulator"};
  app.require_subcommand(1);

  GateFlags rotate_flags;
  CLI::App* rotate = app.add_subcommand("rotate", "run one single-qubit rotation gate");
  add_gate_flags(rotate, rotate_flags, false);

  GateFlags controlled_flags;
  CLI::App* controlled =
      app.add_subcommand("controlled", "run one n-controlled rotation gate");
  add_gate_flags(controlled, controlled_flags, true);

  SweepFlags sweep_flags;
  CLI::App* sweep = app.add_subcommand("cost-sweep", "tabulate the energy cost surface");
  sweep->add_option("--theta0-list", sweep_flags.theta0_list,
                    "comma-separated interpolation angles");
  sweep->add_option("--tau-omega-list", sweep_flags.tau_omega_list,
                    "comma-separated dimensionless times");
  sweep->add_option("--phi", sweep_flags.phi, "rotation angle");
  sweep->add_option("--controls", sweep_flags.controls, "number of control qubits");
  sweep->add_option("--mode", sweep_flags.mode, "adiabatic | superadiabatic");
  sweep->add_option("--samples", sweep_flags.samples, "initial quadrature intervals");
  sweep->add_option("--jobs", sweep_flags.jobs, "worker threads (default $SAGATE_JOBS or 1)");
  sweep->add_option("--out", sweep_flags.out, "output path (default stdout)");
  sweep->add_option("--format", sweep_flags.format, "csv | json");

  GateFlags qsl_flags;
  int qsl_octaves = 6;
  CLI::App* qsl = app.add_subcommand("qsl", "speed-limit check across a tau sweep");
  add_gate_flags(qsl, qsl_flags, false);
  qsl->add_option("--controls", qsl_flags.controls, "number of control qubits");
  qsl->add_option("--tau-octaves", qsl_octaves, "number of times tau is halved");

  CircuitFlags circuit_flags;
  CLI::App* circuit = app.add_subcommand("circuit", "run a circuit file");
  circuit->add_option("file", circuit_flags.path, "circuit JSON path")->required();
  circuit->add_option("--mode", circuit_flags.mode, "adiabatic | superadiabatic");
  circuit->add_option("--steps", circuit_flags.steps, "integrator slices per gate");
  circuit->add_option("--tau-omega", circuit_flags.tau_omega, "default per-gate tau*omega");
  circuit->add_option("--input", circuit_flags.input, "initial bitstring, qubit 0 first");
  circuit->add_option("--out", circuit_flags.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(rotate)) return cmd_gate_run(rotate_flags, "rotate");
    if (app.got_subcommand(controlled)) {
      if (controlled_flags.controls < 1) {
        throw std::invalid_argument("controlled: --controls must be >= 1");
      }
      return cmd_gate_run(controlled_flags, "controlled");
    }
    if (app.got_subcommand(sweep)) return cmd_cost_sweep(sweep_flags);
    if (app.got_subcommand(qsl)) return cmd_qsl(qsl_flags, qsl_octaves);
    if (app.got_subcommand(circuit)) return cmd_circuit(circuit_flags);
  } catch (const BoundViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
