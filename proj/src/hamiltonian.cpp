#include "sagate/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "sagate/detail/derivative.hpp"

namespace sagate {

namespace {

constexpr double k_boundary_tol = 1e-12;
constexpr double k_projector_tol = 1e-10;

// Deterministic eigenvector gauge: largest-magnitude component real and
// positive, ties broken by the lowest index.
Vector fix_gauge(Vector v) {
  int best = 0;
  double best_mag = std::abs(v(0));
  for (int i = 1; i < v.size(); ++i) {
    const double m = std::abs(v(i));
    if (m > best_mag + 1e-12) {
      best = i;
      best_mag = m;
    }
  }
  if (best_mag < 1e-12) return v;
  v *= std::conj(v(best)) / best_mag;
  return v;
}

Vector computational_vector(int dim, int index) {
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return v;
}

}  // namespace

Schedule::Schedule(std::function<double(double)> f, std::function<double(double)> g)
    : f_(std::move(f)), g_(std::move(g)) {
  if (std::abs(f_(0.0) - 1.0) > k_boundary_tol || std::abs(f_(1.0)) > k_boundary_tol ||
      std::abs(g_(0.0)) > k_boundary_tol || std::abs(g_(1.0) - 1.0) > k_boundary_tol) {
    throw std::invalid_argument(
        "Schedule: boundary conditions f(0)=1, f(1)=0, g(0)=0, g(1)=1 violated");
  }
}

GateSpec::GateSpec(BlochAxis axis_, double phi_, int controls_, double theta0_,
                   double omega_, double tau_)
    : axis(axis_), phi(phi_), controls(controls_), theta0(theta0_), omega(omega_),
      tau(tau_) {
  if (controls < 0 || controls > 5) {
    throw std::invalid_argument("GateSpec: control count must be in [0, 5]");
  }
  if (!(theta0 > 0.0) || theta0 > std::numbers::pi + 1e-12) {
    throw std::invalid_argument("GateSpec: theta0 must lie in (0, pi]");
  }
  if (!(omega > 0.0)) throw std::invalid_argument("GateSpec: omega must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("GateSpec: tau must be positive");
}

HermitianOperatorPath::HermitianOperatorPath(int dim, std::function<Matrix(double)> fn)
    : dim_(dim), fn_(std::move(fn)) {
  if (dim_ <= 0) throw std::invalid_argument("HermitianOperatorPath: bad dimension");
}

PiecewiseControlledHamiltonian::PiecewiseControlledHamiltonian(std::vector<Block> blocks,
                                                               std::optional<Split> split)
    : blocks_(std::move(blocks)), split_(std::move(split)) {
  if (blocks_.empty()) {
    throw std::invalid_argument("PiecewiseControlledHamiltonian: no blocks");
  }
  system_dim_ = static_cast<int>(blocks_.front().projector.rows());
  ancilla_dim_ = blocks_.front().path.dim();
  Matrix sum = Matrix::Zero(system_dim_, system_dim_);
  for (const auto& b : blocks_) {
    if (b.projector.rows() != system_dim_ || b.projector.cols() != system_dim_) {
      throw std::invalid_argument("PiecewiseControlledHamiltonian: projector dims differ");
    }
    if (b.path.dim() != ancilla_dim_) {
      throw std::invalid_argument("PiecewiseControlledHamiltonian: ancilla dims differ");
    }
    if ((b.projector - b.projector.adjoint()).cwiseAbs().maxCoeff() > k_projector_tol ||
        (b.projector * b.projector - b.projector).cwiseAbs().maxCoeff() > k_projector_tol) {
      throw std::invalid_argument(
          "PiecewiseControlledHamiltonian: block is not a projector");
    }
    sum += b.projector;
  }
  if ((sum - Matrix::Identity(system_dim_, system_dim_)).cwiseAbs().maxCoeff() >
      k_projector_tol) {
    throw std::invalid_argument("incomplete projector set");
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    for (std::size_t j = i + 1; j < blocks_.size(); ++j) {
      if ((blocks_[i].projector * blocks_[j].projector).cwiseAbs().maxCoeff() >
          k_projector_tol) {
        throw std::invalid_argument(
            "PiecewiseControlledHamiltonian: projectors are not orthogonal");
      }
    }
  }
  if (split_) {
    if (split_->adiabatic.size() != blocks_.size() ||
        split_->counter_diabatic.size() != blocks_.size()) {
      throw std::invalid_argument("PiecewiseControlledHamiltonian: split size mismatch");
    }
  }
}

Matrix PiecewiseControlledHamiltonian::matrix_at(double s) const {
  Matrix h = Matrix::Zero(dim(), dim());
  for (const auto& b : blocks_) {
    h += kron(b.projector, b.path.raw(s));
  }
  return h;
}

Matrix PiecewiseControlledHamiltonian::adiabatic_matrix_at(double s) const {
  if (!split_) return matrix_at(s);
  Matrix h = Matrix::Zero(dim(), dim());
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    h += kron(blocks_[k].projector, split_->adiabatic[k].raw(s));
  }
  return h;
}

Matrix PiecewiseControlledHamiltonian::counter_diabatic_matrix_at(double) const {
  Matrix h = Matrix::Zero(dim(), dim());
  if (!split_) return h;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    h += kron(blocks_[k].projector, split_->counter_diabatic[k]);
  }
  return h;
}

int SpectralPath::level_count() const {
  int n = 0;
  for (const auto& b : blocks) n += static_cast<int>(b.energy.size());
  return n;
}

Vector SpectralPath::composite_eigenvector(int flat_level, double s) const {
  const int block = flat_level / ancilla_dim;
  const int level = flat_level % ancilla_dim;
  if (block < 0 || block >= static_cast<int>(blocks.size())) {
    throw std::invalid_argument("SpectralPath: level index out of range");
  }
  const Vector anc = blocks[block].state[level](s);
  Vector out(system_dim * ancilla_dim);
  for (int i = 0; i < system_dim; ++i) {
    out.segment(i * ancilla_dim, ancilla_dim) = blocks[block].system_vector(i) * anc;
  }
  return out;
}

double SpectralPath::energy_at(int flat_level, double s) const {
  const int block = flat_level / ancilla_dim;
  const int level = flat_level % ancilla_dim;
  return blocks[block].energy[level](s);
}

HermitianOperatorPath gate_hamiltonian(double xi, double theta0, double omega) {
  if (!(theta0 > 0.0) || theta0 > std::numbers::pi + 1e-12) {
    throw std::invalid_argument("gate_hamiltonian: theta0 must lie in (0, pi]");
  }
  if (!(omega > 0.0)) throw std::invalid_argument("gate_hamiltonian: omega must be positive");
  return HermitianOperatorPath(2, [xi, theta0, omega](double s) -> Matrix {
    const double a = theta0 * s;
    const Complex off = std::sin(a) * Complex(std::cos(xi), -std::sin(xi));
    Matrix m(2, 2);
    m(0, 0) = std::cos(a);
    m(1, 1) = -std::cos(a);
    m(0, 1) = off;
    m(1, 0) = std::conj(off);
    return (-omega * k_hbar) * m;
  });
}

PiecewiseControlledHamiltonian generic_cae(const Schedule& schedule,
                                           const HermitianOperator& base,
                                           const std::vector<HermitianOperator>& finals,
                                           const std::vector<HermitianOperator>& projectors) {
  if (finals.size() != projectors.size()) {
    throw std::invalid_argument("generic_cae: one final Hamiltonian per projector required");
  }
  if (projectors.empty()) throw std::invalid_argument("generic_cae: no projectors");
  const int d_s = projectors.front().dim();
  Matrix sum = Matrix::Zero(d_s, d_s);
  for (const auto& p : projectors) sum += p.entries();
  if ((sum - Matrix::Identity(d_s, d_s)).cwiseAbs().maxCoeff() > k_projector_tol) {
    throw std::invalid_argument("incomplete projector set");
  }
  std::vector<PiecewiseControlledHamiltonian::Block> blocks;
  blocks.reserve(projectors.size());
  for (std::size_t k = 0; k < projectors.size(); ++k) {
    if (finals[k].dim() != base.dim()) {
      throw std::invalid_argument("generic_cae: base/final dimension mismatch");
    }
    const Matrix hb = base.entries();
    const Matrix hf = finals[k].entries();
    blocks.push_back({projectors[k].entries(),
                      HermitianOperatorPath(base.dim(), [schedule, hb, hf](double s) {
                        return (schedule.g(s) * hf + schedule.f(s) * hb).eval();
                      })});
  }
  return PiecewiseControlledHamiltonian(std::move(blocks));
}

std::vector<double> block_rotation_angles(const GateSpec& spec) {
  std::vector<double> xi(spec.system_dim(), 0.0);
  xi.back() = spec.phi;
  return xi;
}

namespace {

// Register-factor basis vectors of the gate construction, in block order:
// for every control pattern m the axis-plus then axis-minus target state,
// so the phi block |N-1, axis_minus> comes last.
std::vector<Vector> gate_system_basis(const GateSpec& spec) {
  const auto [plus, minus] = spec.axis.eigenvectors();
  std::vector<Vector> basis;
  if (spec.controls == 0) {
    basis.push_back(plus);
    basis.push_back(minus);
    return basis;
  }
  const int n_patterns = 1 << spec.controls;
  basis.reserve(2 * n_patterns);
  for (int m = 0; m < n_patterns; ++m) {
    const Vector ctrl = computational_vector(n_patterns, m);
    for (const Vector* target : {&plus, &minus}) {
      Vector v(2 * n_patterns);
      for (int i = 0; i < n_patterns; ++i) {
        v.segment(2 * i, 2) = ctrl(i) * (*target);
      }
      basis.push_back(std::move(v));
    }
  }
  return basis;
}

PiecewiseControlledHamiltonian gate_cae(const GateSpec& spec) {
  const auto basis = gate_system_basis(spec);
  const auto angles = block_rotation_angles(spec);
  std::vector<PiecewiseControlledHamiltonian::Block> blocks;
  blocks.reserve(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    blocks.push_back({(basis[k] * basis[k].adjoint()).eval(),
                      gate_hamiltonian(angles[k], spec.theta0, spec.omega)});
  }
  return PiecewiseControlledHamiltonian(std::move(blocks));
}

}  // namespace

PiecewiseControlledHamiltonian single_qubit_cae(const GateSpec& spec) {
  if (spec.controls != 0) {
    throw std::invalid_argument("single_qubit_cae: spec must have zero controls");
  }
  return gate_cae(spec);
}

PiecewiseControlledHamiltonian n_controlled_cae(const GateSpec& spec) {
  if (spec.controls < 1) {
    throw std::invalid_argument("n_controlled_cae: spec must have at least one control");
  }
  return gate_cae(spec);
}

PiecewiseControlledHamiltonian controlled_cae(const GateSpec& spec) {
  return spec.controls == 0 ? single_qubit_cae(spec) : n_controlled_cae(spec);
}

PiecewiseControlledHamiltonian uncontrolled(const HermitianOperatorPath& path) {
  std::vector<PiecewiseControlledHamiltonian::Block> blocks;
  blocks.push_back({Matrix::Identity(1, 1), path});
  return PiecewiseControlledHamiltonian(std::move(blocks));
}

SpectralPath spectral_path(const GateSpec& spec) {
  SpectralPath path;
  path.system_dim = spec.system_dim();
  path.ancilla_dim = 2;
  const auto basis = gate_system_basis(spec);
  const auto angles = block_rotation_angles(spec);
  const double theta0 = spec.theta0;
  const double omega = spec.omega;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    SpectralPath::Block block;
    block.system_vector = basis[k];
    const double xi = angles[k];
    block.energy.emplace_back([omega](double) { return -omega * k_hbar; });
    block.energy.emplace_back([omega](double) { return omega * k_hbar; });
    block.state.emplace_back([xi, theta0](double s) {
      Vector v(2);
      v << std::cos(0.5 * theta0 * s),
          Complex(std::cos(xi), std::sin(xi)) * std::sin(0.5 * theta0 * s);
      return v;
    });
    block.state.emplace_back([xi, theta0](double s) {
      Vector v(2);
      v << -std::sin(0.5 * theta0 * s),
          Complex(std::cos(xi), std::sin(xi)) * std::cos(0.5 * theta0 * s);
      return v;
    });
    path.blocks.push_back(std::move(block));
  }
  return path;
}

SpectralPath spectral_path_numeric(const PiecewiseControlledHamiltonian& h) {
  SpectralPath path;
  path.system_dim = h.system_dim();
  path.ancilla_dim = h.ancilla_dim();
  for (const auto& block : h.blocks()) {
    if (std::abs(block.projector.trace().real() - 1.0) > 1e-9) {
      throw std::invalid_argument("spectral_path_numeric: projector is not rank one");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(block.projector);
    Eigen::Index top;
    es.eigenvalues().maxCoeff(&top);
    SpectralPath::Block out;
    out.system_vector = fix_gauge(es.eigenvectors().col(top));
    const HermitianOperatorPath p = block.path;
    for (int level = 0; level < h.ancilla_dim(); ++level) {
      out.energy.emplace_back([p, level](double s) {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(p.raw(s));
        return solver.eigenvalues()(level);
      });
      out.state.emplace_back([p, level](double s) {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(p.raw(s));
        return fix_gauge(solver.eigenvectors().col(level));
      });
    }
    path.blocks.push_back(std::move(out));
  }
  return path;
}

HermitianOperator cd_analytic(double xi, double theta0, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("cd_analytic: tau must be positive");
  const double scale = k_hbar * theta0 / (2.0 * tau);
  return HermitianOperator(scale * (std::cos(xi) * pauli_y() - std::sin(xi) * pauli_x()));
}

HermitianOperator cd_numeric(const SpectralPath& path, double s, double tau,
                             double fd_step) {
  if (!(tau > 0.0)) throw std::invalid_argument("cd_numeric: tau must be positive");
  const int d_a = path.ancilla_dim;
  const int d_s = path.system_dim;
  Matrix composite = Matrix::Zero(d_s * d_a, d_s * d_a);
  for (const auto& block : path.blocks) {
    for (std::size_t i = 0; i < block.energy.size(); ++i) {
      for (std::size_t j = i + 1; j < block.energy.size(); ++j) {
        if (std::abs(block.energy[i](s) - block.energy[j](s)) < 1e-8) {
          throw std::invalid_argument(
              "cd_numeric: degenerate block spectrum, eigenvector derivative ambiguous");
        }
      }
    }
    Matrix b = Matrix::Zero(d_a, d_a);
    for (std::size_t i = 0; i < block.state.size(); ++i) {
      const Vector v = block.state[i](s);
      const Vector dv =
          detail::central_difference(block.state[i], s, fd_step, /*align=*/true) / tau;
      b += dv * v.adjoint() + (dv.dot(v)) * (v * v.adjoint());
    }
    const Matrix h_block = Complex(0, 1) * k_hbar * b;
    composite += kron((block.system_vector * block.system_vector.adjoint()).eval(),
                      0.5 * (h_block + h_block.adjoint().eval()));
  }
  return HermitianOperator(composite);
}

PiecewiseControlledHamiltonian superadiabatic(const PiecewiseControlledHamiltonian& h,
                                              const GateSpec& spec) {
  const int expected_blocks = spec.system_dim();
  if (h.system_dim() != spec.system_dim() || h.ancilla_dim() != 2 ||
      static_cast<int>(h.blocks().size()) != expected_blocks) {
    throw std::invalid_argument("superadiabatic: Hamiltonian does not match spec");
  }
  const auto angles = block_rotation_angles(spec);
  for (int k = 0; k < expected_blocks; ++k) {
    const HermitianOperatorPath ref = gate_hamiltonian(angles[k], spec.theta0, spec.omega);
    for (double s : {0.0, 0.37, 1.0}) {
      if ((h.blocks()[k].path.raw(s) - ref.raw(s)).cwiseAbs().maxCoeff() > 1e-9) {
        throw std::invalid_argument("superadiabatic: block paths do not match spec");
      }
    }
  }
  std::vector<PiecewiseControlledHamiltonian::Block> blocks;
  PiecewiseControlledHamiltonian::Split split;
  blocks.reserve(expected_blocks);
  for (int k = 0; k < expected_blocks; ++k) {
    const HermitianOperatorPath base = h.blocks()[k].path;
    const Matrix cd = cd_analytic(angles[k], spec.theta0, spec.tau).entries();
    blocks.push_back({h.blocks()[k].projector,
                      HermitianOperatorPath(2, [base, cd](double s) {
                        return (base.raw(s) + cd).eval();
                      })});
    split.adiabatic.push_back(base);
    split.counter_diabatic.push_back(cd);
  }
  return PiecewiseControlledHamiltonian(std::move(blocks), std::move(split));
}

}  // namespace sagate
