#pragma once

#include <Eigen/Dense>

#include "qcland/control_field.hpp"
#include "qcland/propagation.hpp"
#include "qcland/quantum_system.hpp"

namespace qcland {

/// Discrete gradient of an objective with respect to the field samples.
/// Entry (c, k) holds dJ/dE[c,k] = dt * (functional derivative at t_k).
struct GradientField {
  Eigen::ArrayXXd values;  // n_controls x L

  int n_controls() const { return static_cast<int>(values.rows()); }
  int length() const { return static_cast<int>(values.cols()); }
};

/// One of the three control landscapes, all normalized to J in [0, 1]:
///   state transfer   J = |<f|U(T)|i>|^2
///   observable       J = tr[U(T) rho0 U(T)^dagger theta]
///   unitary gate     J = 1/2 + Re tr(W^dagger U(T)) / (2N)
class Objective {
 public:
  enum class Kind { StateTransfer, Observable, UnitaryGate };

  static Objective state_transfer(Eigen::VectorXcd initial, Eigen::VectorXcd final);
  static Objective observable(Eigen::MatrixXcd rho0, Eigen::MatrixXcd theta);
  static Objective unitary_gate(Eigen::MatrixXcd target);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  const Eigen::VectorXcd& initial_state() const { return initial_state_; }
  const Eigen::VectorXcd& final_state() const { return final_state_; }
  const Eigen::MatrixXcd& rho0() const { return rho0_; }
  const Eigen::MatrixXcd& theta() const { return theta_; }
  const Eigen::MatrixXcd& target() const { return target_; }

 private:
  Objective() = default;
  Kind kind_ = Kind::StateTransfer;
  int dim_ = 0;
  Eigen::VectorXcd initial_state_, final_state_;  // state transfer
  Eigen::MatrixXcd rho0_, theta_;                 // observable
  Eigen::MatrixXcd target_;                       // unitary gate
};

/// J from the final unitary alone.
double objective_value(const Objective& obj, const Eigen::MatrixXcd& u_final);
double objective_value(const Objective& obj, const PropagationResult& prop);

/// Exact discrete gradient (includes the dt factor); needs mu_traj.
GradientField objective_gradient(const Objective& obj, const PropagationResult& prop, double dt);

struct Evaluation {
  double value;
  GradientField gradient;
};

/// Propagate + value + gradient in one pass.
Evaluation evaluate(const QuantumSystem& system, const Objective& obj, const ControlField& field);

/// Propagate + value without storing trajectories.
double evaluate_value(const QuantumSystem& system, const Objective& obj, const ControlField& field);

}  // namespace qcland
