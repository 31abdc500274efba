#include "sagate/quad.hpp"

#include <cmath>
#include <stdexcept>

namespace sagate {

namespace {

template <typename T>
T simpson_impl(const std::function<T(double)>& f, double a, double b, int n) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("simpson: interval count must be even and >= 2");
  }
  const double h = (b - a) / n;
  T acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) {
    const double s = a + i * h;
    acc += (i % 2 == 1 ? 4.0 : 2.0) * f(s);
  }
  return acc * (h / 3.0);
}

}  // namespace

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  return simpson_impl<double>(f, a, b, n);
}

std::complex<double> simpson_complex(const std::function<std::complex<double>(double)>& f,
                                     double a, double b, int n) {
  return simpson_impl<std::complex<double>>(f, a, b, n);
}

Quadrature integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              int initial_intervals, double rel_tol, double abs_tol,
                              int max_intervals) {
  int n = initial_intervals;
  if (n % 2 != 0) ++n;
  double prev = simpson(f, a, b, n);
  while (n < max_intervals) {
    n *= 2;
    const double cur = simpson(f, a, b, n);
    const double diff = std::abs(cur - prev);
    if (diff <= std::max(abs_tol, rel_tol * std::abs(cur))) {
      return {cur, n, true};
    }
    prev = cur;
  }
  return {prev, n, false};
}

ComplexQuadrature integrate_adaptive_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    int initial_intervals, double rel_tol, double abs_tol, int max_intervals) {
  int n = initial_intervals;
  if (n % 2 != 0) ++n;
  std::complex<double> prev = simpson_complex(f, a, b, n);
  while (n < max_intervals) {
    n *= 2;
    const std::complex<double> cur = simpson_complex(f, a, b, n);
    const double diff = std::abs(cur - prev);
    if (diff <= std::max(abs_tol, rel_tol * std::abs(cur))) {
      return {cur, n, true};
    }
    prev = cur;
  }
  return {prev, n, false};
}

double simpson_samples(const std::vector<double>& samples, double a, double b) {
  const int n = static_cast<int>(samples.size()) - 1;
  if (n < 1) {
    throw std::invalid_argument("simpson_samples: need at least two samples");
  }
  const double h = (b - a) / n;
  if (n == 1) {
    return 0.5 * h * (samples[0] + samples[1]);
  }
  const int m = (n % 2 == 0) ? n : n - 1;
  double acc = samples[0] + samples[m];
  for (int i = 1; i < m; ++i) {
    acc += (i % 2 == 1 ? 4.0 : 2.0) * samples[i];
  }
  double result = acc * (h / 3.0);
  if (m != n) {
    result += 0.5 * h * (samples[n - 1] + samples[n]);
  }
  return result;
}

}  // namespace sagate
