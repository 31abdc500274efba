#pragma once

// Gate-level layer: run one controlled-evolution gate on a register with a
// reusable ancilla, measure or post-select the ancilla, compose gates into
// circuits, and extract effective unitaries for verification.
//
// Qubit ordering is big-endian: qubit 0 is the leftmost tensor factor (the
// first control). The ancilla is implicit, attached as the last factor for
// the duration of one gate, measured, and reset to |0> afterwards.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sagate/evolve.hpp"
#include "sagate/hamiltonian.hpp"
#include "sagate/qcore.hpp"

namespace sagate {

struct GateOutcome {
  QuantumState register_state;  // post-measurement, ancilla removed
  int ancilla_outcome;
  double success_probability;  // P(ancilla = 1); sin^2(theta0/2) when superadiabatic
  DriveMode mode;
  double target_fidelity;  // pre-measurement composite vs the analytic target
  std::optional<double> infidelity_warning;  // set for visibly non-adiabatic runs
  EvolutionResult evolution;  // composite-register evolution, gate qubits first
};

struct CircuitGate {
  std::optional<std::string> name;  // set when built from a named gate
  BlochAxis axis{0.0, 0.0, 1.0};
  double phi = 0.0;
  int controls = 0;
  double theta0 = 3.14159265358979323846;
  std::optional<double> tau_omega;  // per-gate override of the circuit default
  std::vector<int> targets;         // controls first, target qubit last
};

struct CircuitProgram {
  int qubit_count = 1;
  std::uint64_t seed = 0;
  std::vector<CircuitGate> gates;
};

struct CircuitRun {
  QuantumState final_state;
  std::vector<GateOutcome> outcomes;
  std::vector<double> gate_costs;  // per-gate drive cost, units hbar*omega
  double total_cost;               // their sum
};

/// Named specs, all with theta0 = pi (deterministic), omega = tau = 1:
/// pauli_x, hadamard, phase (takes phi), cnot, toffoli.
GateSpec standard_gate(const std::string& name, double phi = 0.0);

/// Attach a fresh ancilla, evolve under the chosen drive, measure the
/// ancilla (or force outcome 1 when post_select is set). Outcome 1 leaves
/// the rotated register, outcome 0 the original one.
GateOutcome apply_gate(const QuantumState& register_state, const GateSpec& spec,
                       const std::vector<int>& targets, DriveMode mode, double tau,
                       int steps, bool post_select, std::uint64_t rng_seed);

/// Run the gates in order; the ancilla is re-initialized to |0> after each
/// gate. Gates without an explicit tau_omega use tau_per_gate.
CircuitRun run_circuit(const CircuitProgram& program, const QuantumState& input,
                       DriveMode mode, double tau_per_gate, int steps);
CircuitRun run_circuit(const CircuitProgram& program, DriveMode mode, double tau_per_gate,
                       int steps);

/// Effective unitary on the gate's register, column by column through
/// post-selected runs. Requires theta0 = pi unless post_select is set;
/// the result is checked unitary to 1e-8.
Matrix extract_unitary(const GateSpec& spec, DriveMode mode, double tau, int steps,
                       bool post_select = false);

/// Divide by the phase of the largest-magnitude entry (first such entry in
/// row-major order), so unitaries can be compared entrywise.
Matrix phase_normalized(const Matrix& u);

/// Exact rotated register state: the target qubit picks up
/// P_plus + e^{i phi} P_minus whenever all controls are 1.
QuantumState rotated_target(const QuantumState& register_state, const GateSpec& spec,
                            const std::vector<int>& targets);

/// The same conditioned rotation as a matrix on the gate's own register.
Matrix controlled_rotation_unitary(const GateSpec& spec);

/// Strict circuit-file parser: {"qubits": int, "seed": int, "gates": [...]}
/// with per-gate {"name" | "axis"+"phi"+"controls", "targets", optional
/// "theta0" and "tau_omega"}. Unknown keys are rejected with a field
/// diagnostic.
CircuitProgram parse_circuit_file(const std::string& path);
CircuitProgram parse_circuit_text(const std::string& text);

}  // namespace sagate
