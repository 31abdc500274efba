#pragma once

// Complex linear-algebra substrate for small qubit registers: states,
// Hermitian operators, Bloch-axis projectors, tensor products and the
// fidelity / Hilbert-Schmidt metrics everything else is built on.
// Dense storage throughout; register sizes stay at or below six qubits.

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace sagate {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// hbar = 1 everywhere. Energies are quoted in units of hbar*omega and
// times in units of 1/omega.
inline constexpr double k_hbar = 1.0;

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix identity(int dim);

// Kronecker product of raw matrices (row-major index convention:
// the left factor owns the high bits of the composite index).
Matrix kron(const Matrix& a, const Matrix& b);

/// Normalized pure state over a little Hilbert space.
///
/// The amplitude vector must come in normalized to 1e-9; it is then
/// renormalized to machine precision so that downstream operations keep
/// sum |a_i|^2 = 1 within 1e-12.
class QuantumState {
 public:
  explicit QuantumState(Vector amplitudes);

  static QuantumState computational_basis(int dim, int index);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Vector& amplitudes() const { return amps_; }
  Complex amplitude(int i) const { return amps_(i); }
  double norm_error() const;

 private:
  Vector amps_;
};

/// Dense Hermitian matrix. Construction symmetrizes (A + A^dag)/2 and
/// rejects inputs whose asymmetry exceeds 1e-9; silently propagating a
/// drifting matrix would corrupt every cost integral downstream.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }

 private:
  Matrix entries_;
};

/// Unit vector on the Bloch sphere. Rejects vectors more than 1e-9 away
/// from unit length, then renormalizes exactly.
struct BlochAxis {
  double x;
  double y;
  double z;

  BlochAxis(double x, double y, double z);

  // Normalizes an arbitrary nonzero vector first (CLI input path).
  static BlochAxis normalized(double x, double y, double z);

  // n . sigma
  Matrix dot_sigma() const;

  // Orthonormal eigenvectors of n.sigma with eigenvalues +1 / -1.
  std::pair<Vector, Vector> eigenvectors() const;
};

QuantumState tensor(const QuantumState& a, const QuantumState& b);
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);

/// (P_plus, P_minus) with P_pm = (1 pm n.sigma)/2. Complete, orthogonal,
/// idempotent by construction.
std::pair<HermitianOperator, HermitianOperator> bloch_projectors(const BlochAxis& n);

/// |<a|b>|, insensitive to global phase of either argument.
double fidelity(const QuantumState& a, const QuantumState& b);

/// arccos of fidelity (Bures angle between pure states).
double bures_angle(const QuantumState& a, const QuantumState& b);

/// sqrt(Tr[A^dag A]).
double hs_norm(const HermitianOperator& a);
double hs_norm(const Matrix& a);

}  // namespace sagate
