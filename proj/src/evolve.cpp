#include "sagate/evolve.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "sagate/detail/derivative.hpp"
#include "sagate/quad.hpp"

namespace sagate {

namespace {

using Matrix2 = Eigen::Matrix2cd;

// exp(-i H dt) for 2x2 Hermitian H via the Pauli decomposition
// H = a0 I + a.sigma: e^{-i a0 dt} [cos(r dt) I - i sin(r dt) (a.sigma)/r].
Matrix2 slice_exponential_2x2(const Matrix& h, double dt) {
  const double a0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double az = 0.5 * (h(0, 0).real() - h(1, 1).real());
  const double ax = h(0, 1).real();
  const double ay = -h(0, 1).imag();
  const double r = std::sqrt(ax * ax + ay * ay + az * az);
  const Complex global = std::exp(Complex(0.0, -a0 * dt));
  Matrix2 u = Matrix2::Identity();
  if (r > 0.0) {
    const double c = std::cos(r * dt);
    const double s = std::sin(r * dt);
    u(0, 0) = Complex(c, -s * az / r);
    u(1, 1) = Complex(c, s * az / r);
    u(0, 1) = Complex(-s * ay / r, -s * ax / r);
    u(1, 0) = Complex(s * ay / r, -s * ax / r);
  }
  return global * u;
}

Matrix slice_exponential(const Matrix& h, double dt) {
  if (h.rows() == 2) return slice_exponential_2x2(h, dt);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Vector phases =
      (Complex(0.0, -dt) * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

void check_propagate_args(const PiecewiseControlledHamiltonian& h,
                          const QuantumState& psi0, double tau, int steps) {
  if (psi0.dim() != h.dim()) {
    throw std::invalid_argument("propagate: state/Hamiltonian dimension mismatch");
  }
  if (steps < 100) throw std::invalid_argument("propagate: steps must be >= 100");
  if (!(tau > 0.0)) throw std::invalid_argument("propagate: tau must be positive");
}

}  // namespace

void propagate_observed(const PiecewiseControlledHamiltonian& h, const QuantumState& psi0,
                        double tau, int steps,
                        const std::function<void(int, double, const Vector&)>& observer) {
  check_propagate_args(h, psi0, tau, steps);
  const int d_s = h.system_dim();
  const int d_a = h.ancilla_dim();
  const double ds = 1.0 / steps;
  const double dt = tau * ds;
  const auto& blocks = h.blocks();

  using StateMap =
      Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  Vector psi = psi0.amplitudes();
  Vector next(psi.size());
  Matrix tmp(d_s, d_a);

  observer(0, 0.0, psi);
  for (int j = 0; j < steps; ++j) {
    const double s_mid = (j + 0.5) * ds;
    StateMap m(psi.data(), d_s, d_a);
    StateMap out(next.data(), d_s, d_a);
    out.setZero();
    for (const auto& block : blocks) {
      const Matrix u = slice_exponential(block.path.raw(s_mid), dt);
      tmp.noalias() = m * u.transpose();
      out.noalias() += block.projector * tmp;
    }
    psi.swap(next);
    observer(j + 1, (j + 1) * ds, psi);
  }
}

EvolutionResult propagate(const PiecewiseControlledHamiltonian& h, const QuantumState& psi0,
                          double tau, int steps, const ReferenceFn& reference) {
  const int stride = std::max(1, (steps + 511) / 512);
  std::vector<TracePoint> trace;
  trace.reserve(steps / stride + 2);
  Vector final_amps;
  propagate_observed(h, psi0, tau, steps,
                     [&](int j, double s, const Vector& psi) {
                       if (j == 0 || j == steps || j % stride == 0) {
                         TracePoint p;
                         p.s = s;
                         p.norm_error = std::abs(psi.norm() - 1.0);
                         if (reference) {
                           p.fidelity_to_reference =
                               fidelity(QuantumState(psi), reference(s));
                         }
                         trace.push_back(p);
                       }
                       if (j == steps) final_amps = psi;
                     });
  return EvolutionResult{psi0, QuantumState(std::move(final_amps)), std::move(trace),
                         steps, tau};
}

EvolutionResult propagate_dense(const PiecewiseControlledHamiltonian& h,
                                const QuantumState& psi0, double tau, int steps) {
  check_propagate_args(h, psi0, tau, steps);
  const double ds = 1.0 / steps;
  const double dt = tau * ds;
  Vector psi = psi0.amplitudes();
  for (int j = 0; j < steps; ++j) {
    const Matrix hm = h.matrix_at((j + 0.5) * ds);
    const Matrix u = (Complex(0.0, -dt) * hm).exp();
    psi = (u * psi).eval();
  }
  std::vector<TracePoint> trace;
  trace.push_back({1.0, std::nullopt, std::abs(psi.norm() - 1.0)});
  return EvolutionResult{psi0, QuantumState(std::move(psi)), std::move(trace), steps, tau};
}

StateDecomposition ground_decomposition(const SpectralPath& path, const QuantumState& psi0) {
  if (psi0.dim() != path.system_dim * path.ancilla_dim) {
    throw std::invalid_argument("ground_decomposition: dimension mismatch");
  }
  StateDecomposition decomposition;
  double weight = 0.0;
  for (std::size_t l = 0; l < path.blocks.size(); ++l) {
    const int flat = static_cast<int>(l) * path.ancilla_dim;
    const Vector ground = path.composite_eigenvector(flat, 0.0);
    const Complex c = ground.dot(psi0.amplitudes());
    weight += std::norm(c);
    if (std::abs(c) > 1e-14) decomposition.emplace_back(c, flat);
  }
  if (std::abs(weight - 1.0) > 1e-9) {
    throw std::invalid_argument(
        "ground_decomposition: state has weight outside the ground manifold");
  }
  return decomposition;
}

QuantumState adiabatic_reference(const SpectralPath& path,
                                 const StateDecomposition& decomposition, double t,
                                 double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("adiabatic_reference: tau must be positive");
  double weight = 0.0;
  for (const auto& [c, flat] : decomposition) {
    weight += std::norm(c);
    if (flat < 0 || flat >= path.level_count()) {
      throw std::invalid_argument("adiabatic_reference: level index out of range");
    }
  }
  if (std::abs(weight - 1.0) > 1e-9) {
    throw std::invalid_argument("adiabatic_reference: coefficients are not normalized");
  }
  const double s = t / tau;
  Vector out = Vector::Zero(path.system_dim * path.ancilla_dim);
  for (const auto& [c, flat] : decomposition) {
    const int block = flat / path.ancilla_dim;
    const int level = flat % path.ancilla_dim;
    Complex factor = c;
    if (s != 0.0) {
      const auto& energy = path.blocks[block].energy[level];
      const Quadrature dyn = integrate_adaptive(
          [&](double u) { return energy(u); }, 0.0, s, 64, 1e-12, 1e-14);
      factor *= std::exp(Complex(0.0, -tau * dyn.value / k_hbar));
      const auto& state = path.blocks[block].state[level];
      const ComplexQuadrature geo = integrate_adaptive_complex(
          [&](double u) -> Complex {
            const Vector v = state(u);
            const Vector dv =
                detail::central_difference(state, u, 1e-6, /*align=*/false);
            return v.dot(dv);
          },
          0.0, s, 64, 1e-10, 1e-12);
      factor *= std::exp(-geo.value);
    }
    out += factor * path.composite_eigenvector(flat, s);
  }
  return QuantumState(std::move(out));
}

}  // namespace sagate
