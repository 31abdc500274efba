#pragma once

// Every drive used by the simulator: the piecewise controlled form
// H(s) = sum_k P_k (x) H_k(s) with projectors on the register and
// two-level paths on the ancilla, the concrete rotation-gate paths,
// their instantaneous spectra, and the counter-diabatic terms (analytic
// closed form and generic numeric construction) that assemble the
// superadiabatic drive H + H_CD.

#include <functional>
#include <optional>
#include <vector>

#include "sagate/qcore.hpp"

namespace sagate {

enum class DriveMode { adiabatic, superadiabatic };

/// Interpolation schedule for a generic controlled evolution:
/// f ramps the base term off, g ramps the final terms on.
class Schedule {
 public:
  Schedule(std::function<double(double)> f, std::function<double(double)> g);

  static Schedule linear() {
    return Schedule([](double s) { return 1.0 - s; }, [](double s) { return s; });
  }

  double f(double s) const { return f_(s); }
  double g(double s) const { return g_(s); }

 private:
  std::function<double(double)> f_;
  std::function<double(double)> g_;
};

/// Full parametrization of one controlled rotation gate: axis and angle of
/// the rotation, number of control qubits, interpolation angle theta0,
/// energy scale omega and total evolution time tau.
struct GateSpec {
  BlochAxis axis;
  double phi;
  int controls;
  double theta0;
  double omega;
  double tau;

  GateSpec(BlochAxis axis, double phi, int controls, double theta0, double omega,
           double tau);

  int system_dim() const { return 1 << (controls + 1); }
  int composite_dim() const { return system_dim() * 2; }
};

/// Map from dimensionless time s in [0, 1] to a Hermitian matrix.
class HermitianOperatorPath {
 public:
  HermitianOperatorPath(int dim, std::function<Matrix(double)> fn);

  HermitianOperator operator()(double s) const { return HermitianOperator(fn_(s)); }
  Matrix raw(double s) const { return fn_(s); }
  int dim() const { return dim_; }

 private:
  int dim_;
  std::function<Matrix(double)> fn_;
};

/// H(s) = sum_k P_k (x) H_k(s). The projectors form a complete orthogonal
/// set on the register factor; each block carries its own ancilla path.
class PiecewiseControlledHamiltonian {
 public:
  struct Block {
    Matrix projector;
    HermitianOperatorPath path;
  };

  // Adiabatic/counter-diabatic decomposition recorded by superadiabatic().
  struct Split {
    std::vector<HermitianOperatorPath> adiabatic;
    std::vector<Matrix> counter_diabatic;
  };

  explicit PiecewiseControlledHamiltonian(std::vector<Block> blocks,
                                          std::optional<Split> split = {});

  int system_dim() const { return system_dim_; }
  int ancilla_dim() const { return ancilla_dim_; }
  int dim() const { return system_dim_ * ancilla_dim_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::optional<Split>& split() const { return split_; }

  Matrix matrix_at(double s) const;
  HermitianOperator at(double s) const { return HermitianOperator(matrix_at(s)); }

  Matrix adiabatic_matrix_at(double s) const;
  Matrix counter_diabatic_matrix_at(double s) const;

 private:
  std::vector<Block> blocks_;
  int system_dim_;
  int ancilla_dim_;
  std::optional<Split> split_;
};

/// Gauge-fixed instantaneous spectrum of a piecewise Hamiltonian, stored
/// blockwise: rank-one register vector |lambda_l> plus per-level energy and
/// ancilla eigenvector functions of s. Level 0 is the ground level.
struct SpectralPath {
  struct Block {
    Vector system_vector;
    std::vector<std::function<double(double)>> energy;
    std::vector<std::function<Vector(double)>> state;
  };

  std::vector<Block> blocks;
  int system_dim = 1;
  int ancilla_dim = 2;

  int level_count() const;
  // Flat level index = block * ancilla_dim + level_in_block.
  Vector composite_eigenvector(int flat_level, double s) const;
  double energy_at(int flat_level, double s) const;
};

/// Two-level rotation path
///   H_xi(s) = -omega {sigma_z cos(theta0 s) + sin(theta0 s)
///             [sigma_x cos xi + sigma_y sin xi]},
/// with eigenvalues exactly -/+ omega for every s.
HermitianOperatorPath gate_hamiltonian(double xi, double theta0, double omega);

/// Generic controlled evolution: H_k(s) = g(s) final_k + f(s) base for each
/// projector in a complete orthogonal set over the register.
PiecewiseControlledHamiltonian generic_cae(const Schedule& schedule,
                                           const HermitianOperator& base,
                                           const std::vector<HermitianOperator>& finals,
                                           const std::vector<HermitianOperator>& projectors);

/// Uncontrolled rotation: projectors onto the axis eigenstates of a single
/// register qubit, paths H_0 and H_phi on the ancilla. dim 4.
PiecewiseControlledHamiltonian single_qubit_cae(const GateSpec& spec);

/// n-controlled rotation on a register of n control qubits plus one target:
/// every block drives the ancilla with H_0 except |N-1, axis_minus>, which
/// gets H_phi. dim 2^(n+2).
PiecewiseControlledHamiltonian n_controlled_cae(const GateSpec& spec);

/// Dispatch on spec.controls.
PiecewiseControlledHamiltonian controlled_cae(const GateSpec& spec);

/// Wrap a bare path as a trivial one-block controlled Hamiltonian.
PiecewiseControlledHamiltonian uncontrolled(const HermitianOperatorPath& path);

/// Analytic eigensystem of the gate construction: per block the closed-form
/// eigenvectors
///   |eps_xi^-(s)> = cos(theta0 s / 2)|0> + e^{i xi} sin(theta0 s / 2)|1>
///   |eps_xi^+(s)> = -sin(theta0 s / 2)|0> + e^{i xi} cos(theta0 s / 2)|1>
/// with constant energies -/+ omega. The gauge satisfies <eps|d_s eps> = 0.
SpectralPath spectral_path(const GateSpec& spec);

/// Numeric spectrum of an arbitrary piecewise Hamiltonian with rank-one
/// projectors. Eigenvector phase gauge: the largest-magnitude component is
/// made real and positive (ties broken by lowest index).
SpectralPath spectral_path_numeric(const PiecewiseControlledHamiltonian& h);

/// Time-independent counter-diabatic term for one gate block:
///   (theta0 / 2 tau) [sigma_y cos xi - sigma_x sin xi].
HermitianOperator cd_analytic(double xi, double theta0, double tau);

/// Counter-diabatic operator from eigenvector derivatives,
///   i sum_n (|d_t n><n| + <d_t n|n> |n><n|),
/// assembled blockwise as sum_l P_l (x) H_l^CD. Central differences in s
/// with step fd_step, Richardson fallback when half-step estimates
/// disagree beyond 1e-7. Rejects blocks with a degenerate spectrum.
HermitianOperator cd_numeric(const SpectralPath& path, double s, double tau,
                             double fd_step = 1e-6);

/// H_SA(s) = H(s) + H_CD with the constant per-block counter-diabatic term
/// of the gate construction; records the split for the cost diagnostics.
PiecewiseControlledHamiltonian superadiabatic(const PiecewiseControlledHamiltonian& h,
                                              const GateSpec& spec);

// xi value attached to each block of the gate construction (phi on the
// last block, 0 elsewhere).
std::vector<double> block_rotation_angles(const GateSpec& spec);

}  // namespace sagate
