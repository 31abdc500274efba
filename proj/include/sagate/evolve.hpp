#pragma once

// Time-dependent Schrodinger integration for piecewise controlled
// Hamiltonians, plus the analytic transported-eigenstate trajectory used
// as the fidelity reference.
//
// The integrator is a midpoint exponential-slice propagator:
//   psi_{j+1} = exp(-i H((j + 1/2) ds) tau ds) psi_j,
// with the slice exponential computed exactly per 2x2 ancilla block, so
// every slice is unitary and the global error is second order in ds.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "sagate/hamiltonian.hpp"
#include "sagate/qcore.hpp"

namespace sagate {

struct TracePoint {
  double s;
  std::optional<double> fidelity_to_reference;
  double norm_error;
};

struct EvolutionResult {
  QuantumState initial_state;
  QuantumState final_state;
  std::vector<TracePoint> trace;
  int steps;
  double tau;
};

using ReferenceFn = std::function<QuantumState(double)>;

/// Integrate from s = 0 to s = 1. steps >= 100. The trace is sampled at no
/// more than 512 evenly spaced points; when a reference trajectory is given
/// each sample also records the fidelity against it.
EvolutionResult propagate(const PiecewiseControlledHamiltonian& h,
                          const QuantumState& psi0, double tau, int steps,
                          const ReferenceFn& reference = {});

/// Same stepping, but hands every intermediate state to the observer:
/// observer(j, s_j, psi_j) for j = 0..steps with s_j = j/steps, where psi_0
/// is the initial state.
void propagate_observed(const PiecewiseControlledHamiltonian& h, const QuantumState& psi0,
                        double tau, int steps,
                        const std::function<void(int, double, const Vector&)>& observer);

/// Reference route for cross-checks: assembles the full matrix each slice
/// and exponentiates by scaling and squaring. Identical to propagate() to
/// 1e-12; much slower.
EvolutionResult propagate_dense(const PiecewiseControlledHamiltonian& h,
                                const QuantumState& psi0, double tau, int steps);

/// (coefficient, flat eigenlevel index) pairs; see SpectralPath for the
/// flat index convention.
using StateDecomposition = std::vector<std::pair<Complex, int>>;

/// Transported-eigenstate trajectory at time t: each component carries the
/// dynamical phase exp(-i integral of E dt') and the geometric factor
/// exp(-integral of <n|d n> dt'); the latter is exactly 1 for the gate
/// paths, whose gauge keeps <eps|d_s eps> = 0.
QuantumState adiabatic_reference(const SpectralPath& path,
                                 const StateDecomposition& decomposition, double t,
                                 double tau);

/// Expand a state onto the ground levels of every block. Throws when more
/// than 1e-9 of the weight lies outside the ground manifold.
StateDecomposition ground_decomposition(const SpectralPath& path,
                                        const QuantumState& psi0);

}  // namespace sagate
