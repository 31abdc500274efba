#include "sagate/metrics.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "sagate/detail/derivative.hpp"
#include "sagate/quad.hpp"

namespace sagate {

namespace {

constexpr double k_quad_slack = 1e-9;

void validate_split(const PiecewiseControlledHamiltonian& h_sa, int nodes) {
  if (!h_sa.split()) return;
  for (int i = 0; i <= nodes; ++i) {
    const double s = static_cast<double>(i) / nodes;
    const double direct = hs_norm(h_sa.matrix_at(s));
    const double ad = hs_norm(h_sa.adiabatic_matrix_at(s));
    const double cd = hs_norm(h_sa.counter_diabatic_matrix_at(s));
    const double split = std::sqrt(ad * ad + cd * cd);
    if (std::abs(split - direct) > 1e-9 * (1.0 + direct)) {
      throw std::runtime_error(
          "energy_cost_numeric: orthogonal split violated at s = " + std::to_string(s));
    }
  }
}

}  // namespace

double energy_cost_numeric(const PiecewiseControlledHamiltonian& h_sa, double tau,
                           int samples) {
  if (!(tau > 0.0)) throw std::invalid_argument("energy_cost_numeric: tau must be positive");
  if (samples < 64) throw std::invalid_argument("energy_cost_numeric: samples must be >= 64");
  const auto integrand = [&](double s) { return hs_norm(h_sa.matrix_at(s)); };
  const Quadrature q = integrate_adaptive(integrand, 0.0, 1.0, samples, 1e-8, 1e-12,
                                          1 << 20);
  if (!q.converged) {
    throw std::runtime_error("energy_cost_numeric: quadrature did not converge");
  }
  validate_split(h_sa, std::min(q.intervals, 1024));
  return q.value;
}

double energy_cost_closed(double theta0, double omega, double tau) {
  if (!(theta0 > 0.0) || !(omega > 0.0) || !(tau > 0.0)) {
    throw std::invalid_argument("energy_cost_closed: arguments must be positive");
  }
  const double x = theta0 / (2.0 * tau * omega);
  return 2.0 * std::sqrt(1.0 + x * x) * k_hbar * omega;
}

double fubini_study_speed_sq(const SpectralPath& path, int flat_level, double s,
                             double tau) {
  if (flat_level < 0 || flat_level >= path.level_count()) {
    throw std::invalid_argument("fubini_study_speed_sq: level index out of range");
  }
  const int block = flat_level / path.ancilla_dim;
  const int level = flat_level % path.ancilla_dim;
  const auto& state = path.blocks[block].state[level];
  const Vector v = state(s);
  const Vector dv = detail::central_difference(state, s, 1e-6, /*align=*/true) / tau;
  const double speed_sq = dv.squaredNorm() - std::norm(v.dot(dv));
  return std::max(0.0, speed_sq);
}

QSLReport qsl_report(const EvolutionResult& result,
                     const PiecewiseControlledHamiltonian& h_sa, const SpectralPath& path,
                     double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("qsl_report: tau must be positive");
  const StateDecomposition decomposition =
      ground_decomposition(path, result.initial_state);

  // Transported ground trajectory, no dynamical phases.
  const auto ground = [&](double s) {
    Vector v = Vector::Zero(path.system_dim * path.ancilla_dim);
    for (const auto& [c, flat] : decomposition) {
      v += c * path.composite_eigenvector(flat, s);
    }
    return v;
  };
  const Vector g0 = ground(0.0);

  const auto overlap = [&](double s) { return g0.dot(ground(s)); };
  const auto d_ground = [&](double s) {
    return detail::central_difference(ground, s, 1e-6, /*align=*/false);
  };

  QSLReport report{};
  report.eta = k_hbar *
               integrate_adaptive([&](double s) { return std::abs(overlap(s)); }, 0.0, 1.0)
                   .value;
  report.eta1 =
      integrate_adaptive(
          [&](double s) {
            Complex acc = 0.0;
            for (const auto& [c, flat] : decomposition) {
              acc += std::norm(c) * path.energy_at(flat, s) *
                     path.composite_eigenvector(flat, 0.0)
                         .dot(path.composite_eigenvector(flat, s));
            }
            return std::abs(acc);
          },
          0.0, 1.0)
          .value;
  report.eta2 =
      k_hbar *
      integrate_adaptive([&](double s) { return std::abs(g0.dot(d_ground(s))); }, 0.0, 1.0)
          .value;
  report.eta3 = k_hbar * integrate_adaptive(
                             [&](double s) {
                               const Vector g = ground(s);
                               return std::abs(g.dot(d_ground(s)) * g0.dot(ground(s)));
                             },
                             0.0, 1.0)
                             .value;
  report.chi = report.eta2 + report.eta3;
  report.chi_floor = k_hbar * std::abs(std::min(1.0, std::abs(overlap(1.0))) - 1.0);

  // E_tau over the state the integrator actually produced.
  const Vector psi0 = result.initial_state.amplitudes();
  std::vector<double> samples(result.steps + 1);
  propagate_observed(h_sa, result.initial_state, tau, result.steps,
                     [&](int j, double s, const Vector& psi) {
                       samples[j] = std::abs(psi0.dot(h_sa.matrix_at(s) * psi));
                     });
  report.e_tau = simpson_samples(samples, 0.0, 1.0);

  report.bures = bures_angle(result.initial_state, result.final_state);
  const double distance = k_hbar * std::abs(std::cos(report.bures) - 1.0);
  report.ml_bound_time = report.e_tau > 1e-15 ? distance / report.e_tau : 0.0;
  report.slack = tau - report.ml_bound_time;

  if (report.slack < -k_quad_slack) {
    throw BoundViolation("qsl_report: Margolus-Levitin bound violated, slack " +
                         std::to_string(report.slack));
  }
  if (report.eta1 * tau + report.chi < report.chi_floor - k_quad_slack) {
    throw BoundViolation("qsl_report: eta/chi decomposition bound violated");
  }
  if (report.chi < report.chi_floor - k_quad_slack) {
    throw BoundViolation("qsl_report: chi fell below |cos L - 1|");
  }
  return report;
}

CostReport cost_report(const GateSpec& spec, int samples) {
  const PiecewiseControlledHamiltonian h = controlled_cae(spec);
  const PiecewiseControlledHamiltonian h_sa = superadiabatic(h, spec);
  CostReport report{};
  report.sigma_numeric = energy_cost_numeric(h_sa, spec.tau, samples);
  report.sigma_adiabatic = energy_cost_numeric(h, spec.tau, samples);
  report.sigma_closed = energy_cost_closed(spec.theta0, spec.omega, spec.tau);
  report.sigma_controlled = std::sqrt(2.0) * report.sigma_closed;
  report.tau = spec.tau;
  report.theta0 = spec.theta0;
  report.omega = spec.omega;
  return report;
}

}  // namespace sagate
