#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qcland/control_field.hpp"
#include "qcland/quantum_system.hpp"

namespace qcland {

/// Stored unitary trajectory of one propagation plus the time-evolved
/// dipoles entering the gradient formulas. u_traj holds L+1 unitaries
/// (t_0 = 0 ... t_L = T); mu_traj holds the left-grid-point dipoles
/// mu_c(t_k) = U(t_k)^dagger mu_c U(t_k). mu_avg holds the same dipoles
/// averaged over each step in the step generator's eigenbasis, which makes
/// the sampled gradient the exact derivative of the discretized objective
/// (mu_avg -> mu_traj as dt -> 0).
struct PropagationResult {
  std::vector<Eigen::MatrixXcd> u_traj;
  std::vector<std::vector<Eigen::MatrixXcd>> mu_traj;  // [control][k]
  std::vector<std::vector<Eigen::MatrixXcd>> mu_avg;   // [control][k]

  const Eigen::MatrixXcd& u_final() const { return u_traj.back(); }
};

/// Piecewise-constant propagation of dU/dt = -i (H0 - sum_c mu_c E_c(t)) U,
/// U(0) = I. Each step applies the exact exponential of the Hermitian step
/// generator via eigendecomposition, so every stored U is unitary to
/// rounding. Deterministic.
PropagationResult propagate(const QuantumSystem& system, const ControlField& field);

/// Same product formula, but returns only U(T) and stores nothing.
Eigen::MatrixXcd final_unitary(const QuantumSystem& system, const ControlField& field);

/// Closed-form propagator of the uncontrollable two-level system
/// (H0 = 0, mu = offdiag(1,1)):
///   U(T) = [[cos phi, i sin phi], [i sin phi, cos phi]],
/// phi = sum_k E_k dt. Exact oracle for propagate() on that system.
Eigen::MatrixXcd analytic_two_level(const ControlField& field);

/// The two-level system matching analytic_two_level.
QuantumSystem uncontrollable_two_level();

}  // namespace qcland
