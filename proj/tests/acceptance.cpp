// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line with its worst observed margin; the process exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "sagate/circuit.hpp"
#include "sagate/evolve.hpp"
#include "sagate/hamiltonian.hpp"
#include "sagate/metrics.hpp"
#include "sagate/qcore.hpp"

using namespace sagate;
using test_util::oracle_kron;
using test_util::random_state_vector;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

// End-of-evolution composite target from projector algebra alone:
// cos(theta0/2) |psi>|0> + sin(theta0/2) (U |psi>)|1>,
// U = 1 + (e^{i phi} - 1) |last block><last block|.
Vector composite_target(const GateSpec& spec, const Vector& psi) {
  const auto [plus, minus] = spec.axis.eigenvectors();
  Matrix p_last = minus * minus.adjoint();
  if (spec.controls > 0) {
    const int n_patterns = 1 << spec.controls;
    Matrix top = Matrix::Zero(n_patterns, n_patterns);
    top(n_patterns - 1, n_patterns - 1) = 1.0;
    p_last = oracle_kron(top, p_last);
  }
  const int d = spec.system_dim();
  const Matrix u = Matrix::Identity(d, d) +
                   (Complex(std::cos(spec.phi), std::sin(spec.phi)) - 1.0) * p_last;
  const Vector rotated = u * psi;
  Vector target = Vector::Zero(2 * d);
  for (int i = 0; i < d; ++i) {
    target(2 * i) = std::cos(0.5 * spec.theta0) * psi(i);
    target(2 * i + 1) = std::sin(0.5 * spec.theta0) * rotated(i);
  }
  return target;
}

QuantumState ground_start(const GateSpec& spec, const Vector& psi) {
  Vector full = Vector::Zero(2 * spec.system_dim());
  for (int i = 0; i < spec.system_dim(); ++i) full(2 * i) = psi(i);
  return QuantumState(full);
}

Outcome criterion_transitionless() {
  std::mt19937 gen(2024);
  const BlochAxis axis = BlochAxis::normalized(1, 1, 1);
  double worst = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int controls : {0, 1, 2}) {
    for (double theta0 : {pi / 2, 0.9 * pi, pi}) {
      for (double phi : {pi / 4, pi / 2, pi}) {
        for (double tau : {0.1, 1.0, 10.0}) {
          const GateSpec spec(axis, phi, controls, theta0, 1.0, tau);
          const auto h_sa = superadiabatic(controlled_cae(spec), spec);
          const Vector psi = random_state_vector(gen, spec.system_dim());
          const auto result = propagate(h_sa, ground_start(spec, psi), tau, 20000);
          const double infidelity =
              1.0 -
              fidelity(result.final_state, QuantumState(composite_target(spec, psi)));
          worst = std::max(worst, infidelity);
        }
      }
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "81-point grid, worst infidelity %.2e (limit 1e-7), %.1f s", worst,
                seconds);
  return {worst <= 1e-7 && seconds < 60.0, detail};
}

Outcome criterion_cd_equivalence() {
  std::mt19937 gen(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const double xi = 2 * pi * u(gen);
    const double theta0 = 0.15 + (pi - 0.15) * u(gen);
    const double tau = std::pow(10.0, -1.0 + 2.0 * u(gen));  // tau*omega in [0.1, 10]
    const double s = u(gen);
    const auto path = spectral_path_numeric(uncontrolled(gate_hamiltonian(xi, theta0, 1.0)));
    const double deviation = hs_norm(
        Matrix(cd_numeric(path, s, tau).entries() - cd_analytic(xi, theta0, tau).entries()));
    worst = std::max(worst, deviation);
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail), "100 draws, worst HS deviation %.2e (limit 1e-8)",
                worst);
  return {worst <= 1e-8, detail};
}

Outcome criterion_energy_cost() {
  double worst_rel = 0.0;
  bool monotone = true;
  for (double theta0 : {pi / 4, pi / 2, 0.9 * pi, pi}) {
    double previous = 1e300;
    for (double tau : {0.1, 0.5, 1.0, 5.0, 20.0}) {
      const GateSpec spec(BlochAxis(0, 0, 1), pi, 0, theta0, 1.0, tau);
      const auto h_sa = superadiabatic(single_qubit_cae(spec), spec);
      const double numeric = energy_cost_numeric(h_sa, tau);
      const double closed = energy_cost_closed(theta0, 1.0, tau);
      worst_rel = std::max(worst_rel, std::abs(numeric - closed) / closed);
      if (numeric >= previous) monotone = false;
      previous = numeric;
    }
  }

  const GateSpec wide(BlochAxis(0, 0, 1), pi, 0, pi, 1.0, 50.0);
  const double asymptote =
      std::abs(energy_cost_numeric(superadiabatic(single_qubit_cae(wide), wide), 50.0) -
               2.0);

  const double theta0 = 0.9 * pi, tau = 0.7;
  const GateSpec single(BlochAxis(0, 0, 1), 0.6 * pi, 0, theta0, 1.0, tau);
  const GateSpec controlled(BlochAxis(0, 0, 1), 0.6 * pi, 1, theta0, 1.0, tau);
  const double sigma_single =
      energy_cost_numeric(superadiabatic(single_qubit_cae(single), single), tau);
  const double sigma_controlled =
      energy_cost_numeric(superadiabatic(n_controlled_cae(controlled), controlled), tau);
  const double ratio_error =
      std::abs(sigma_controlled - std::sqrt(2.0) * sigma_single) / sigma_controlled;

  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "worst closed-form mismatch %.2e (1e-6), monotone %s, "
                "|Sigma(50) - 2| = %.2e (1e-2), controlled ratio error %.2e (1e-6)",
                worst_rel, monotone ? "yes" : "NO", asymptote, ratio_error);
  return {worst_rel <= 1e-6 && monotone && asymptote < 1e-2 && ratio_error <= 1e-6,
          detail};
}

Outcome criterion_orthogonal_split() {
  std::mt19937 gen(88);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_trace = 0.0, worst_split = 0.0;
  for (int controls : {0, 1, 2}) {
    const GateSpec spec(BlochAxis::normalized(1, 2, 2), 0.8 * pi, controls, 0.9 * pi, 1.0,
                        0.5);
    const auto h_sa = superadiabatic(controlled_cae(spec), spec);
    for (int trial = 0; trial < 100; ++trial) {
      const double s = u(gen);
      const Matrix h = h_sa.adiabatic_matrix_at(s);
      const Matrix cd = h_sa.counter_diabatic_matrix_at(s);
      worst_trace = std::max(worst_trace, std::abs((h * cd + cd * h).trace()));
      const double total_sq = std::pow(hs_norm(h_sa.matrix_at(s)), 2);
      worst_split = std::max(
          worst_split,
          std::abs(total_sq - std::pow(hs_norm(h), 2) - std::pow(hs_norm(cd), 2)));
    }
  }
  char detail[140];
  std::snprintf(detail, sizeof(detail),
                "worst |Tr{H,H_CD}| %.2e, worst norm-split defect %.2e (limits 1e-9)",
                worst_trace, worst_split);
  return {worst_trace <= 1e-9 && worst_split <= 1e-9, detail};
}

Outcome criterion_qsl() {
  const std::vector<GateSpec> specs = {
      GateSpec(BlochAxis::normalized(1, 0, 1), pi / 2, 0, 0.9 * pi, 1.0, 1.0),
      GateSpec(BlochAxis(1, 0, 0), pi, 0, pi, 1.0, 1.0),
      GateSpec(BlochAxis::normalized(1, 1, 1), pi / 4, 1, pi / 2, 1.0, 1.0)};
  double worst_slack = 1e300, worst_chi_margin = 1e300, min_tau = 1e300;
  std::mt19937 gen(99);
  for (const auto& base : specs) {
    double tau = 1.6;
    for (int octave = 0; octave <= 6; ++octave, tau *= 0.5) {
      const GateSpec spec(base.axis, base.phi, base.controls, base.theta0, 1.0, tau);
      const auto h_sa = superadiabatic(controlled_cae(spec), spec);
      const auto path = spectral_path(spec);
      const Vector psi = random_state_vector(gen, spec.system_dim());
      const auto result = propagate(h_sa, ground_start(spec, psi), tau, 20000);
      QSLReport report;
      try {
        report = qsl_report(result, h_sa, path, tau);
      } catch (const BoundViolation& e) {
        return {false, std::string("bound violation at tau*omega = ") +
                           std::to_string(tau) + ": " + e.what()};
      }
      worst_slack = std::min(worst_slack, report.slack);
      worst_chi_margin = std::min(worst_chi_margin, report.chi - report.chi_floor);
      min_tau = std::min(min_tau, tau);
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "min slack %.2e, min chi margin %.2e (limits -1e-9), tau*omega down to %g",
                worst_slack, worst_chi_margin, min_tau);
  return {worst_slack >= -1e-9 && worst_chi_margin >= -1e-9 && min_tau <= 0.025 + 1e-12,
          detail};
}

Outcome criterion_gate_truth_tables() {
  Matrix cnot = Matrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
  Matrix toffoli = Matrix::Identity(8, 8);
  toffoli(6, 6) = toffoli(7, 7) = 0;
  toffoli(6, 7) = toffoli(7, 6) = 1;

  double worst = 0.0;
  const auto check_gate = [&](const char* name, const Matrix& expected) {
    const Matrix u = phase_normalized(
        extract_unitary(standard_gate(name), DriveMode::superadiabatic, 0.5, 4000));
    worst = std::max(worst, (u - expected).cwiseAbs().maxCoeff());
  };
  check_gate("pauli_x", pauli_x());
  check_gate("cnot", cnot);
  check_gate("toffoli", toffoli);

  const auto h_out = apply_gate(QuantumState::computational_basis(2, 0),
                                standard_gate("hadamard"), {0},
                                DriveMode::superadiabatic, 0.5, 4000, false, 1);
  Vector balanced(2);
  balanced << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const double h_infidelity =
      1.0 - fidelity(h_out.register_state, QuantumState(balanced));

  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "worst entrywise gate error %.2e (1e-6), hadamard infidelity %.2e (1e-6)",
                worst, h_infidelity);
  return {worst <= 1e-6 && h_infidelity <= 1e-6, detail};
}

Outcome criterion_measurement_statistics() {
  const GateSpec half(BlochAxis(1, 0, 0), pi, 0, pi / 2, 1.0, 0.5);
  const QuantumState input = QuantumState::computational_basis(2, 0);
  const int shots = 10000;
  int ones = 0;
  for (int shot = 0; shot < shots; ++shot) {
    ones += apply_gate(input, half, {0}, DriveMode::superadiabatic, 0.5, 128, false,
                       static_cast<std::uint64_t>(shot))
                .ancilla_outcome;
  }
  const double freq = static_cast<double>(ones) / shots;
  const double three_sigma = 3.0 * std::sqrt(0.25 / shots);

  const GateSpec deterministic(BlochAxis(1, 0, 0), pi, 0, pi, 1.0, 0.5);
  const double p = apply_gate(input, deterministic, {0}, DriveMode::superadiabatic, 0.5,
                              20000, false, 1)
                       .success_probability;

  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "freq(1) = %.4f over %d shots (3 sigma = %.4f), |p(theta0=pi) - 1| = %.2e",
                freq, shots, three_sigma, std::abs(p - 1.0));
  return {std::abs(freq - 0.5) <= three_sigma && std::abs(p - 1.0) <= 1e-9, detail};
}

Outcome criterion_adiabatic_limit() {
  std::mt19937 gen(111);
  const Vector psi = random_state_vector(gen, 2);
  std::vector<double> infidelities;
  for (double tau : {1.0, 10.0, 100.0}) {
    const GateSpec spec(BlochAxis::normalized(1, 0, 1), pi / 2, 0, 0.9 * pi, 1.0, tau);
    const auto h = single_qubit_cae(spec);
    const int steps = std::max(20000, static_cast<int>(2000 * tau));
    const auto result = propagate(h, ground_start(spec, psi), tau, steps);
    infidelities.push_back(
        1.0 - fidelity(result.final_state, QuantumState(composite_target(spec, psi))));
  }
  const bool decreasing =
      infidelities[0] > infidelities[1] && infidelities[1] > infidelities[2];
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "infidelity 1 - F = {%.2e, %.2e, %.2e} along tau*omega = {1, 10, 100}",
                infidelities[0], infidelities[1], infidelities[2]);
  return {decreasing && infidelities[2] < 1e-2, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"transitionless exactness over the gate grid", criterion_transitionless},
      {"counter-diabatic analytic/numeric equivalence", criterion_cd_equivalence},
      {"energy-cost closed form, monotonicity, asymptote", criterion_energy_cost},
      {"orthogonal drive/counter-diabatic split", criterion_orthogonal_split},
      {"speed-limit suite over a 6-octave tau sweep", criterion_qsl},
      {"gate truth tables (X, CNOT, Toffoli, Hadamard)", criterion_gate_truth_tables},
      {"measurement statistics at theta0 = pi/2 and pi", criterion_measurement_statistics},
      {"adiabatic-limit sanity without the shortcut", criterion_adiabatic_limit},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %zu: %s — %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
