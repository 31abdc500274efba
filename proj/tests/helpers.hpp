#pragma once

// Shared test utilities. The oracle routines here are written from scratch
// on purpose: they must stay independent of the library paths they check.

#include <complex>
#include <functional>
#include <random>

#include "sagate/qcore.hpp"

namespace test_util {

using sagate::Complex;
using sagate::Matrix;
using sagate::Vector;

// Independent Kronecker product (index convention: left factor high bits).
inline Matrix oracle_kron(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline Vector random_state_vector(std::mt19937& gen, int dim) {
  std::normal_distribution<double> dist;
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(dist(gen), dist(gen));
  return v / v.norm();
}

inline sagate::BlochAxis random_axis(std::mt19937& gen) {
  std::normal_distribution<double> dist;
  double x = 0, y = 0, z = 0;
  do {
    x = dist(gen);
    y = dist(gen);
    z = dist(gen);
  } while (x * x + y * y + z * z < 1e-6);
  return sagate::BlochAxis::normalized(x, y, z);
}

// Classic fixed-step RK4 on i dpsi/dt = H(t) psi, parametrized by s = t/tau,
// i.e. dpsi/ds = -i tau H(s) psi. Independent of the library integrator.
inline Vector rk4_evolve(const std::function<Matrix(double)>& h, Vector psi, double tau,
                         int steps) {
  const double ds = 1.0 / steps;
  const Complex mi(0.0, -1.0);
  for (int j = 0; j < steps; ++j) {
    const double s = j * ds;
    const Vector k1 = mi * tau * (h(s) * psi);
    const Vector k2 = mi * tau * (h(s + 0.5 * ds) * (psi + 0.5 * ds * k1));
    const Vector k3 = mi * tau * (h(s + 0.5 * ds) * (psi + 0.5 * ds * k2));
    const Vector k4 = mi * tau * (h(s + ds) * (psi + ds * k3));
    psi += (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

}  // namespace test_util
