#pragma once

// Energy-cost functionals and quantum-speed-limit diagnostics.
//
// The cost of a drive is the time-averaged Hilbert-Schmidt norm
//   Sigma(tau) = (1/tau) integral_0^tau ||H_SA(t)|| dt,
// which for the rotation-gate construction has the closed form
//   Sigma = 2 sqrt(1 + theta0^2 / (4 (tau omega)^2))  [units hbar omega],
// with a sqrt(2) factor for one-control gates. The speed-limit side checks
// the generalized Margolus-Levitin bound tau >= |cos L - 1| / E_tau and the
// decomposition eta1 * tau + chi >= |cos L - 1| of its right-hand side.

#include <stdexcept>

#include "sagate/evolve.hpp"
#include "sagate/hamiltonian.hpp"
#include "sagate/qcore.hpp"

namespace sagate {

/// Raised when a speed-limit inequality is violated beyond quadrature
/// tolerance; distinct from plain numerical failures so callers can map it
/// to a dedicated exit code.
struct BoundViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CostReport {
  double sigma_numeric;     // quadrature of ||H_SA||, units hbar*omega
  double sigma_closed;      // closed form for the uncontrolled gate
  double sigma_adiabatic;   // quadrature of ||H|| alone (Sigma_0)
  double sigma_controlled;  // sqrt(2) x sigma_closed (one-control gate)
  double tau;
  double theta0;
  double omega;
};

struct QSLReport {
  double bures;          // L between the evolved endpoints
  double e_tau;          // time-averaged |<Psi(0)|H_SA(t)|Psi(t)>|
  double ml_bound_time;  // |cos L - 1| / E_tau
  double eta;            // integral of |<g(0)|g(s)>|
  double eta1;           // integral of |E_0(s) <g(0)|g(s)>|
  double eta2;           // integral of |<g(0)|d_s g(s)>|
  double eta3;           // integral of |<g(s)|d_s g(s)> <g(0)|g(s)>|
  double chi;            // eta2 + eta3
  double chi_floor;      // |cos L_ref - 1| on the transported trajectory
  double slack;          // tau - ml_bound_time
};

/// Composite-Simpson quadrature of ||H_SA(s)|| with node doubling until the
/// relative change drops below 1e-8. When the drive carries its
/// adiabatic/counter-diabatic split, sqrt(Tr[H^2] + Tr[H_CD^2]) is checked
/// against the direct norm at every node (1e-9).
double energy_cost_numeric(const PiecewiseControlledHamiltonian& h_sa, double tau,
                           int samples = 128);

/// 2 sqrt(1 + theta0^2 / (4 (tau omega)^2)) in units of hbar*omega.
double energy_cost_closed(double theta0, double omega, double tau);

/// Fubini-Study speed squared of one instantaneous eigenvector:
/// <d_t n|d_t n> - |<n|d_t n>|^2. Equals theta0^2 / (4 tau^2) on every
/// level of the gate construction.
double fubini_study_speed_sq(const SpectralPath& path, int flat_level, double s,
                             double tau);

/// Full speed-limit diagnostics for an evolution started in the ground
/// manifold. Throws BoundViolation if the Margolus-Levitin bound or the
/// eta/chi decomposition fails beyond -1e-9.
QSLReport qsl_report(const EvolutionResult& result,
                     const PiecewiseControlledHamiltonian& h_sa, const SpectralPath& path,
                     double tau);

/// Cost bundle for one gate spec: numeric quadrature on the assembled
/// superadiabatic drive next to the closed forms.
CostReport cost_report(const GateSpec& spec, int samples = 128);

}  // namespace sagate
