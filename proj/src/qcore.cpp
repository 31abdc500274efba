#include "sagate/qcore.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sagate {

namespace {

constexpr double k_norm_reject = 1e-9;
constexpr double k_hermitian_reject = 1e-9;

}  // namespace

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

QuantumState::QuantumState(Vector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) {
    throw std::invalid_argument("QuantumState: empty amplitude vector");
  }
  const double n = amps_.norm();
  if (std::abs(n - 1.0) > k_norm_reject) {
    throw std::invalid_argument("QuantumState: amplitudes not normalized (norm " +
                                std::to_string(n) + ")");
  }
  amps_ /= n;
}

QuantumState QuantumState::computational_basis(int dim, int index) {
  if (dim <= 0 || index < 0 || index >= dim) {
    throw std::invalid_argument("computational_basis: index out of range");
  }
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return QuantumState(std::move(v));
}

double QuantumState::norm_error() const { return std::abs(amps_.norm() - 1.0); }

HermitianOperator::HermitianOperator(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw std::invalid_argument("HermitianOperator: matrix must be square");
  }
  const double asym = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > k_hermitian_reject) {
    throw std::invalid_argument("HermitianOperator: asymmetry " + std::to_string(asym) +
                                " exceeds 1e-9");
  }
  entries_ = 0.5 * (entries_ + entries_.adjoint().eval());
}

BlochAxis::BlochAxis(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (std::abs(n - 1.0) > k_norm_reject) {
    throw std::invalid_argument("BlochAxis: vector is not unit length");
  }
  x /= n;
  y /= n;
  z /= n;
}

BlochAxis BlochAxis::normalized(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (n < 1e-12) {
    throw std::invalid_argument("BlochAxis: cannot normalize a zero vector");
  }
  return BlochAxis(x / n, y / n, z / n);
}

Matrix BlochAxis::dot_sigma() const {
  return x * pauli_x() + y * pauli_y() + z * pauli_z();
}

std::pair<Vector, Vector> BlochAxis::eigenvectors() const {
  Vector plus(2);
  // Two algebraically equivalent forms, picked for stability near the poles.
  if (z >= 0.0) {
    plus << Complex(1.0 + z, 0.0), Complex(x, y);
  } else {
    plus << Complex(x, -y), Complex(1.0 - z, 0.0);
  }
  plus /= plus.norm();
  Vector minus(2);
  minus << -std::conj(plus(1)), std::conj(plus(0));
  return {plus, minus};
}

QuantumState tensor(const QuantumState& a, const QuantumState& b) {
  Vector out(a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i) {
    out.segment(i * b.dim(), b.dim()) = a.amplitude(i) * b.amplitudes();
  }
  return QuantumState(std::move(out));
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.entries(), b.entries()));
}

std::pair<HermitianOperator, HermitianOperator> bloch_projectors(const BlochAxis& n) {
  const Matrix ns = n.dot_sigma();
  const Matrix id = identity(2);
  return {HermitianOperator(0.5 * (id + ns)), HermitianOperator(0.5 * (id - ns))};
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

double bures_angle(const QuantumState& a, const QuantumState& b) {
  const double f = std::min(1.0, fidelity(a, b));
  return std::acos(f);
}

double hs_norm(const HermitianOperator& a) { return a.entries().norm(); }

double hs_norm(const Matrix& a) { return a.norm(); }

}  // namespace sagate
