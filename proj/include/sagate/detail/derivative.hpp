#pragma once

// Central-difference derivatives of vector-valued functions of s, with an
// optional phase alignment of the offset samples against the center sample
// (used wherever the result must be insensitive to the eigenvector gauge).

#include <cmath>
#include <functional>

#include "sagate/qcore.hpp"

namespace sagate::detail {

inline Vector phase_align(Vector v, const Vector& ref) {
  const Complex overlap = ref.dot(v);  // <ref|v>
  const double mag = std::abs(overlap);
  if (mag < 1e-12) return v;
  v *= std::conj(overlap) / mag;
  return v;
}

inline Vector central_difference(const std::function<Vector(double)>& f, double s,
                                 double h, bool align) {
  Vector center;
  if (align) center = f(s);
  auto sample = [&](double x) {
    Vector v = f(x);
    return align ? phase_align(std::move(v), center) : v;
  };
  const Vector d_full = (sample(s + h) - sample(s - h)) / (2.0 * h);
  const Vector d_half = (sample(s + 0.5 * h) - sample(s - 0.5 * h)) / h;
  if ((d_full - d_half).cwiseAbs().maxCoeff() > 1e-7) {
    return (4.0 * d_half - d_full) / 3.0;  // Richardson
  }
  return d_full;
}

}  // namespace sagate::detail
