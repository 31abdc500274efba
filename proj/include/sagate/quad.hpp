#pragma once

// Composite-Simpson quadrature with node doubling. All integrands in this
// project are smooth trigonometric expressions, so convergence is fast and
// a failure to converge signals a real numerical problem upstream.

#include <complex>
#include <functional>
#include <vector>

namespace sagate {

struct Quadrature {
  double value = 0.0;
  int intervals = 0;
  bool converged = false;
};

struct ComplexQuadrature {
  std::complex<double> value{0.0, 0.0};
  int intervals = 0;
  bool converged = false;
};

// Composite Simpson rule on [a, b] with n intervals (n must be even).
double simpson(const std::function<double(double)>& f, double a, double b, int n);
std::complex<double> simpson_complex(const std::function<std::complex<double>(double)>& f,
                                     double a, double b, int n);

// Doubles the interval count until two successive estimates agree to
// max(abs_tol, rel_tol * |I|), starting from initial_intervals.
Quadrature integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              int initial_intervals = 64, double rel_tol = 1e-10,
                              double abs_tol = 1e-13, int max_intervals = (1 << 22));

ComplexQuadrature integrate_adaptive_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    int initial_intervals = 64, double rel_tol = 1e-10, double abs_tol = 1e-13,
    int max_intervals = (1 << 22));

// Simpson rule over uniformly spaced samples (trapezoid tail if the
// sample count is even). samples.size() >= 2.
double simpson_samples(const std::vector<double>& samples, double a, double b);

}  // namespace sagate
