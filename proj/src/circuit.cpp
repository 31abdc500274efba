#include "sagate/circuit.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sagate/metrics.hpp"

namespace sagate {

namespace {

std::uint64_t splitmix_mix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double uniform_from_seed(std::uint64_t seed) {
  return static_cast<double>(splitmix_mix(seed) >> 11) * 0x1.0p-53;
}

std::uint64_t gate_stream_seed(std::uint64_t seed, std::size_t gate_index) {
  return splitmix_mix(seed + 0x9E3779B97F4A7C15ull * (gate_index + 1));
}

int qubit_count_of(const QuantumState& state) {
  int dim = state.dim();
  int n = 0;
  while (dim > 1) {
    if (dim % 2 != 0) throw std::invalid_argument("register dimension is not a power of 2");
    dim /= 2;
    ++n;
  }
  return n;
}

// Reorder qubits: in the output, qubit q' is the input qubit order[q'].
// Big-endian indexing, qubit 0 owns the most significant bit.
Vector permute_qubits(const Vector& amps, const std::vector<int>& order) {
  const int n = static_cast<int>(order.size());
  const int dim = 1 << n;
  Vector out(dim);
  for (int i = 0; i < dim; ++i) {
    int target = 0;
    for (int q = 0; q < n; ++q) {
      const int bit = (i >> (n - 1 - order[q])) & 1;
      target |= bit << (n - 1 - q);
    }
    out(target) = amps(i);
  }
  return out;
}

std::vector<int> inverse_order(const std::vector<int>& order) {
  std::vector<int> inv(order.size());
  for (std::size_t q = 0; q < order.size(); ++q) {
    inv[order[q]] = static_cast<int>(q);
  }
  return inv;
}

std::vector<int> gate_front_order(const std::vector<int>& targets, int qubit_count) {
  std::vector<int> order = targets;
  std::vector<bool> used(qubit_count, false);
  for (int t : targets) used[t] = true;
  for (int q = 0; q < qubit_count; ++q) {
    if (!used[q]) order.push_back(q);
  }
  return order;
}

void validate_targets(const std::vector<int>& targets, int controls, int qubit_count) {
  if (static_cast<int>(targets.size()) != controls + 1) {
    throw std::invalid_argument("apply_gate: expected " + std::to_string(controls + 1) +
                                " target indices (controls first, target last)");
  }
  std::set<int> seen;
  for (int t : targets) {
    if (t < 0 || t >= qubit_count) {
      throw std::invalid_argument("apply_gate: target index out of range");
    }
    if (!seen.insert(t).second) {
      throw std::invalid_argument("apply_gate: target indices must be distinct");
    }
  }
}

// P_k (x) I over the spectator qubits, same ancilla paths.
PiecewiseControlledHamiltonian with_spectators(const PiecewiseControlledHamiltonian& h,
                                               int spectator_qubits) {
  if (spectator_qubits == 0) return h;
  const Matrix id = identity(1 << spectator_qubits);
  std::vector<PiecewiseControlledHamiltonian::Block> blocks;
  blocks.reserve(h.blocks().size());
  for (const auto& b : h.blocks()) {
    blocks.push_back({kron(b.projector, id), b.path});
  }
  return PiecewiseControlledHamiltonian(std::move(blocks));
}

}  // namespace

GateSpec standard_gate(const std::string& name, double phi) {
  const double pi = std::numbers::pi;
  const double r = 1.0 / std::sqrt(2.0);
  if (name == "pauli_x") return GateSpec(BlochAxis(1, 0, 0), pi, 0, pi, 1.0, 1.0);
  if (name == "hadamard") return GateSpec(BlochAxis(r, 0, r), pi, 0, pi, 1.0, 1.0);
  if (name == "phase") return GateSpec(BlochAxis(0, 0, 1), phi, 0, pi, 1.0, 1.0);
  if (name == "cnot") return GateSpec(BlochAxis(1, 0, 0), pi, 1, pi, 1.0, 1.0);
  if (name == "toffoli") return GateSpec(BlochAxis(1, 0, 0), pi, 2, pi, 1.0, 1.0);
  throw std::invalid_argument("standard_gate: unknown gate name '" + name + "'");
}

Matrix controlled_rotation_unitary(const GateSpec& spec) {
  const auto [p_plus, p_minus] = bloch_projectors(spec.axis);
  const Matrix rotation =
      p_plus.entries() +
      Complex(std::cos(spec.phi), std::sin(spec.phi)) * p_minus.entries();
  if (spec.controls == 0) return rotation;
  const int dim = spec.system_dim();
  Matrix u = Matrix::Identity(dim, dim);
  u.block(dim - 2, dim - 2, 2, 2) = rotation;
  return u;
}

QuantumState rotated_target(const QuantumState& register_state, const GateSpec& spec,
                            const std::vector<int>& targets) {
  const int qubits = qubit_count_of(register_state);
  validate_targets(targets, spec.controls, qubits);
  const auto order = gate_front_order(targets, qubits);
  const int spectators = qubits - spec.controls - 1;
  Vector psi = permute_qubits(register_state.amplitudes(), order);
  const Matrix u = kron(controlled_rotation_unitary(spec), identity(1 << spectators));
  psi = (u * psi).eval();
  return QuantumState(permute_qubits(psi, inverse_order(order)));
}

GateOutcome apply_gate(const QuantumState& register_state, const GateSpec& base_spec,
                       const std::vector<int>& targets, DriveMode mode, double tau,
                       int steps, bool post_select, std::uint64_t rng_seed) {
  // The explicit tau overrides spec.tau; the counter-diabatic term scales
  // with the time the evolution actually takes.
  const GateSpec spec(base_spec.axis, base_spec.phi, base_spec.controls, base_spec.theta0,
                      base_spec.omega, tau);
  const int qubits = qubit_count_of(register_state);
  validate_targets(targets, spec.controls, qubits);
  const int spectators = qubits - spec.controls - 1;

  const auto order = gate_front_order(targets, qubits);
  const Vector psi_perm = permute_qubits(register_state.amplitudes(), order);

  // Fresh ancilla in |0> as the last factor.
  Vector psi_full = Vector::Zero(psi_perm.size() * 2);
  for (int i = 0; i < psi_perm.size(); ++i) psi_full(2 * i) = psi_perm(i);

  PiecewiseControlledHamiltonian h_gate = controlled_cae(spec);
  if (mode == DriveMode::superadiabatic) h_gate = superadiabatic(h_gate, spec);
  const PiecewiseControlledHamiltonian h_run = with_spectators(h_gate, spectators);

  EvolutionResult evolution = propagate(h_run, QuantumState(psi_full), tau, steps);
  const Vector& final_full = evolution.final_state.amplitudes();

  // Analytic target: cos(theta0/2) |psi>|0> + sin(theta0/2) |psi_rot>|1>.
  const Matrix u_rot =
      kron(controlled_rotation_unitary(spec), identity(1 << spectators));
  const Vector psi_rot = u_rot * psi_perm;
  Vector target = Vector::Zero(final_full.size());
  const double c = std::cos(0.5 * spec.theta0);
  const double s = std::sin(0.5 * spec.theta0);
  for (int i = 0; i < psi_perm.size(); ++i) {
    target(2 * i) = c * psi_perm(i);
    target(2 * i + 1) = s * psi_rot(i);
  }
  const double target_fidelity =
      fidelity(evolution.final_state, QuantumState(std::move(target)));

  double p_one = 0.0;
  for (int i = 0; i < psi_perm.size(); ++i) p_one += std::norm(final_full(2 * i + 1));

  int outcome = 1;
  if (!post_select) {
    outcome = uniform_from_seed(rng_seed) < p_one ? 1 : 0;
  }
  const double branch_probability = outcome == 1 ? p_one : 1.0 - p_one;
  if (branch_probability < 1e-12) {
    throw std::runtime_error("apply_gate: selected measurement branch has probability ~0");
  }
  Vector collapsed(psi_perm.size());
  for (int i = 0; i < psi_perm.size(); ++i) collapsed(i) = final_full(2 * i + outcome);
  collapsed /= std::sqrt(branch_probability);

  GateOutcome result{QuantumState(permute_qubits(collapsed, inverse_order(order))),
                     outcome,
                     p_one,
                     mode,
                     target_fidelity,
                     std::nullopt,
                     std::move(evolution)};
  if (mode == DriveMode::adiabatic && 1.0 - target_fidelity > 1e-3) {
    result.infidelity_warning = 1.0 - target_fidelity;
  }
  return result;
}

CircuitRun run_circuit(const CircuitProgram& program, const QuantumState& input,
                       DriveMode mode, double tau_per_gate, int steps) {
  if (input.dim() != (1 << program.qubit_count)) {
    throw std::invalid_argument("run_circuit: input state does not match qubit count");
  }
  CircuitRun run{input, {}, {}, 0.0};
  for (std::size_t g = 0; g < program.gates.size(); ++g) {
    const CircuitGate& gate = program.gates[g];
    const double tau = gate.tau_omega.value_or(tau_per_gate);
    const GateSpec spec(gate.axis, gate.phi, gate.controls, gate.theta0, 1.0, tau);
    GateOutcome outcome = apply_gate(run.final_state, spec, gate.targets, mode, tau,
                                     steps, false, gate_stream_seed(program.seed, g));
    run.final_state = outcome.register_state;

    PiecewiseControlledHamiltonian h = controlled_cae(spec);
    if (mode == DriveMode::superadiabatic) h = superadiabatic(h, spec);
    const double cost = energy_cost_numeric(h, tau);
    run.gate_costs.push_back(cost);
    run.total_cost += cost;
    run.outcomes.push_back(std::move(outcome));
  }
  return run;
}

CircuitRun run_circuit(const CircuitProgram& program, DriveMode mode, double tau_per_gate,
                       int steps) {
  return run_circuit(program,
                     QuantumState::computational_basis(1 << program.qubit_count, 0), mode,
                     tau_per_gate, steps);
}

Matrix extract_unitary(const GateSpec& spec, DriveMode mode, double tau, int steps,
                       bool post_select) {
  if (!post_select && std::abs(spec.theta0 - std::numbers::pi) > 1e-12) {
    throw std::invalid_argument(
        "extract_unitary: theta0 != pi is non-deterministic; pass post_select");
  }
  const int dim = spec.system_dim();
  std::vector<int> targets(spec.controls + 1);
  for (int i = 0; i <= spec.controls; ++i) targets[i] = i;
  Matrix u(dim, dim);
  for (int b = 0; b < dim; ++b) {
    const GateOutcome out =
        apply_gate(QuantumState::computational_basis(dim, b), spec, targets, mode, tau,
                   steps, /*post_select=*/true, 0);
    u.col(b) = out.register_state.amplitudes();
  }
  const double defect = (u.adjoint() * u - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (defect > 1e-8) {
    throw std::runtime_error("extract_unitary: extracted matrix is not unitary, defect " +
                             std::to_string(defect));
  }
  return u;
}

Matrix phase_normalized(const Matrix& u) {
  const double max_mag = u.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      if (std::abs(u(i, j)) >= max_mag - 1e-12) {
        return u * (std::abs(u(i, j)) / u(i, j));
      }
    }
  }
  return u;
}

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw std::invalid_argument("circuit file: " + where + ": " + what);
}

void reject_unknown_keys(const json& object, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    (void)value;
    if (!allowed.contains(key)) schema_error(where, "unknown key '" + key + "'");
  }
}

double number_field(const json& object, const std::string& key, const std::string& where) {
  if (!object.at(key).is_number()) schema_error(where, "'" + key + "' must be a number");
  return object.at(key).get<double>();
}

CircuitGate parse_gate(const json& g, int qubit_count, const std::string& where) {
  if (!g.is_object()) schema_error(where, "gate must be an object");
  CircuitGate gate;
  const bool named = g.contains("name");
  if (named) {
    if (!g.at("name").is_string()) schema_error(where, "'name' must be a string");
    const std::string name = g.at("name").get<std::string>();
    std::set<std::string> allowed = {"name", "targets", "theta0", "tau_omega"};
    if (name == "phase") allowed.insert("phi");
    reject_unknown_keys(g, allowed, where);
    if (name == "phase" && !g.contains("phi")) schema_error(where, "phase gate needs 'phi'");
    const double phi = name == "phase" ? number_field(g, "phi", where) : 0.0;
    const GateSpec spec = standard_gate(name, phi);
    gate.name = name;
    gate.axis = spec.axis;
    gate.phi = spec.phi;
    gate.controls = spec.controls;
    gate.theta0 = spec.theta0;
  } else {
    reject_unknown_keys(g, {"axis", "phi", "controls", "targets", "theta0", "tau_omega"},
                        where);
    if (!g.contains("axis") || !g.contains("phi") || !g.contains("controls")) {
      schema_error(where, "expected 'name' or all of 'axis', 'phi', 'controls'");
    }
    const json& axis = g.at("axis");
    if (!axis.is_array() || axis.size() != 3 || !axis[0].is_number() ||
        !axis[1].is_number() || !axis[2].is_number()) {
      schema_error(where, "'axis' must be an array of three numbers");
    }
    try {
      gate.axis = BlochAxis::normalized(axis[0].get<double>(), axis[1].get<double>(),
                                        axis[2].get<double>());
    } catch (const std::invalid_argument& e) {
      schema_error(where, e.what());
    }
    gate.phi = number_field(g, "phi", where);
    if (!g.at("controls").is_number_integer()) {
      schema_error(where, "'controls' must be an integer");
    }
    gate.controls = g.at("controls").get<int>();
    if (gate.controls < 0 || gate.controls > 5) {
      schema_error(where, "'controls' out of range [0, 5]");
    }
  }
  if (g.contains("theta0")) {
    gate.theta0 = number_field(g, "theta0", where);
    if (!(gate.theta0 > 0.0) || gate.theta0 > std::numbers::pi + 1e-12) {
      schema_error(where, "'theta0' must lie in (0, pi]");
    }
  }
  if (g.contains("tau_omega")) {
    const double t = number_field(g, "tau_omega", where);
    if (!(t > 0.0)) schema_error(where, "'tau_omega' must be positive");
    gate.tau_omega = t;
  }
  if (!g.contains("targets") || !g.at("targets").is_array()) {
    schema_error(where, "'targets' must be an array");
  }
  for (const auto& t : g.at("targets")) {
    if (!t.is_number_integer()) schema_error(where, "'targets' entries must be integers");
    gate.targets.push_back(t.get<int>());
  }
  if (static_cast<int>(gate.targets.size()) != gate.controls + 1) {
    schema_error(where, "'targets' must list the controls followed by the target qubit");
  }
  std::set<int> seen;
  for (int t : gate.targets) {
    if (t < 0 || t >= qubit_count) schema_error(where, "target index out of range");
    if (!seen.insert(t).second) schema_error(where, "duplicate target index");
  }
  return gate;
}

}  // namespace

CircuitProgram parse_circuit_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("circuit file: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("circuit file: top level must be an object");
  reject_unknown_keys(doc, {"qubits", "seed", "gates"}, "top level");
  for (const char* key : {"qubits", "seed", "gates"}) {
    if (!doc.contains(key)) {
      throw std::invalid_argument(std::string("circuit file: missing key '") + key + "'");
    }
  }
  if (!doc.at("qubits").is_number_integer()) {
    throw std::invalid_argument("circuit file: 'qubits' must be an integer");
  }
  CircuitProgram program;
  program.qubit_count = doc.at("qubits").get<int>();
  if (program.qubit_count < 1 || program.qubit_count > 5) {
    throw std::invalid_argument("circuit file: 'qubits' out of range [1, 5]");
  }
  if (!doc.at("seed").is_number_integer()) {
    throw std::invalid_argument("circuit file: 'seed' must be an integer");
  }
  program.seed = doc.at("seed").get<std::uint64_t>();
  if (!doc.at("gates").is_array()) {
    throw std::invalid_argument("circuit file: 'gates' must be an array");
  }
  int index = 0;
  for (const auto& g : doc.at("gates")) {
    program.gates.push_back(
        parse_gate(g, program.qubit_count, "gates[" + std::to_string(index) + "]"));
    ++index;
  }
  return program;
}

CircuitProgram parse_circuit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("circuit file: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_circuit_text(buffer.str());
}

}  // namespace sagate
