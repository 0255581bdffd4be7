#include "qcland/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace qcland {
namespace {

using cd = std::complex<double>;

void require_dim(const Objective& obj, Eigen::Index n) {
  if (obj.dim() != n) {
    throw std::invalid_argument("objective dimension does not match unitary");
  }
}

// tr(A * B) for N x N matrices with B Hermitian, evaluated elementwise.
cd trace_product(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a.array() * b.transpose().array()).sum();
}

}  // namespace

Objective Objective::state_transfer(Eigen::VectorXcd initial, Eigen::VectorXcd final) {
  if (initial.size() != final.size() || initial.size() < 2) {
    throw std::invalid_argument("state_transfer: bad state dimensions");
  }
  if (std::abs(initial.norm() - 1.0) > 1e-12 || std::abs(final.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("state_transfer: states must be normalized");
  }
  Objective obj;
  obj.kind_ = Kind::StateTransfer;
  obj.dim_ = static_cast<int>(initial.size());
  obj.initial_state_ = std::move(initial);
  obj.final_state_ = std::move(final);
  return obj;
}

Objective Objective::observable(Eigen::MatrixXcd rho0, Eigen::MatrixXcd theta) {
  const auto n = rho0.rows();
  if (rho0.cols() != n || theta.rows() != n || theta.cols() != n || n < 2) {
    throw std::invalid_argument("observable: bad matrix dimensions");
  }
  if (hermiticity_defect(rho0) > 1e-12 || hermiticity_defect(theta) > 1e-12) {
    throw std::invalid_argument("observable: rho0 and theta must be Hermitian");
  }
  if (std::abs(rho0.trace().real() - 1.0) > 1e-12 || std::abs(rho0.trace().imag()) > 1e-12) {
    throw std::invalid_argument("observable: rho0 must have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho0, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12) {
    throw std::invalid_argument("observable: rho0 must be positive semidefinite");
  }
  Objective obj;
  obj.kind_ = Kind::Observable;
  obj.dim_ = static_cast<int>(n);
  obj.rho0_ = std::move(rho0);
  obj.theta_ = std::move(theta);
  return obj;
}

Objective Objective::unitary_gate(Eigen::MatrixXcd target) {
  const auto n = target.rows();
  if (target.cols() != n || n < 2) {
    throw std::invalid_argument("unitary_gate: target must be square");
  }
  if (unitarity_defect(target) > 1e-10) {
    throw std::invalid_argument("unitary_gate: target must be unitary");
  }
  Objective obj;
  obj.kind_ = Kind::UnitaryGate;
  obj.dim_ = static_cast<int>(n);
  obj.target_ = std::move(target);
  return obj;
}

double objective_value(const Objective& obj, const Eigen::MatrixXcd& u_final) {
  require_dim(obj, u_final.rows());
  switch (obj.kind()) {
    case Objective::Kind::StateTransfer: {
      const cd amp = obj.final_state().dot(u_final * obj.initial_state());
      return std::norm(amp);
    }
    case Objective::Kind::Observable: {
      const Eigen::MatrixXcd rho_t = u_final * obj.rho0() * u_final.adjoint();
      return trace_product(rho_t, obj.theta()).real();
    }
    case Objective::Kind::UnitaryGate: {
      const cd tr = (obj.target().adjoint() * u_final).trace();
      return 0.5 + tr.real() / (2.0 * static_cast<double>(obj.dim()));
    }
  }
  throw std::logic_error("unreachable");
}

double objective_value(const Objective& obj, const PropagationResult& prop) {
  return objective_value(obj, prop.u_final());
}

GradientField objective_gradient(const Objective& obj, const PropagationResult& prop, double dt) {
  const Eigen::MatrixXcd& u_final = prop.u_final();
  require_dim(obj, u_final.rows());
  if (prop.mu_avg.empty() || prop.mu_avg.front().empty()) {
    throw std::invalid_argument("objective_gradient: propagation lacks mu trajectory");
  }
  const int nc = static_cast<int>(prop.mu_avg.size());
  const int len = static_cast<int>(prop.mu_avg.front().size());

  // Effective operator A and prefactor kappa such that
  // dJ/dE_c(t_k) = kappa * Im tr[A mu_c(t_k)].
  Eigen::MatrixXcd a;
  double kappa = 0.0;
  switch (obj.kind()) {
    case Objective::Kind::StateTransfer: {
      const Eigen::VectorXcd ut_f = u_final.adjoint() * obj.final_state();
      const cd amp = obj.final_state().dot(u_final * obj.initial_state());
      a = amp * ut_f * obj.initial_state().adjoint();
      kappa = 2.0;
      break;
    }
    case Objective::Kind::Observable: {
      a = u_final.adjoint() * obj.theta() * u_final * obj.rho0();
      kappa = 2.0;
      break;
    }
    case Objective::Kind::UnitaryGate: {
      a = obj.target().adjoint() * u_final;
      kappa = -1.0 / (2.0 * static_cast<double>(obj.dim()));
      break;
    }
  }

  // mu_avg makes this the exact derivative of the discretized objective, so
  // finite differences agree to truncation error on any grid.
  GradientField grad;
  grad.values.resize(nc, len);
  const Eigen::MatrixXcd at = a.transpose();
  for (int c = 0; c < nc; ++c) {
    const auto& per_control = prop.mu_avg[static_cast<std::size_t>(c)];
    for (int k = 0; k < len; ++k) {
      const cd tr = (at.array() * per_control[static_cast<std::size_t>(k)].array()).sum();
      grad.values(c, k) = kappa * dt * tr.imag();
    }
  }
  return grad;
}

Evaluation evaluate(const QuantumSystem& system, const Objective& obj, const ControlField& field) {
  const PropagationResult prop = propagate(system, field);
  return Evaluation{objective_value(obj, prop), objective_gradient(obj, prop, field.dt())};
}

double evaluate_value(const QuantumSystem& system, const Objective& obj,
                      const ControlField& field) {
  return objective_value(obj, final_unitary(system, field));
}

}  // namespace qcland
