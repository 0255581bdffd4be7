#include "qcland/propagation.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qcland {
namespace {

using cd = std::complex<double>;

// The step generator is Hermitian, so each exponential is computed exactly
// through its eigendecomposition and the product stays in U(N) to rounding.
// Small fixed-size instantiations avoid heap traffic in the hot loop.
template <typename MatT>
void run_product(const QuantumSystem& sys, const ControlField& field,
                 PropagationResult* store, Eigen::MatrixXcd* u_final) {
  const int n = sys.dim();
  const int nc = sys.n_controls();
  const int len = field.length();
  const double dt = field.dt();
  const auto& samples = field.samples();

  MatT h0(n, n);
  h0 = sys.h0();
  std::vector<MatT> mus(static_cast<std::size_t>(nc));
  for (int c = 0; c < nc; ++c) mus[static_cast<std::size_t>(c)] = sys.dipole(c);

  Eigen::SelfAdjointEigenSolver<MatT> es;
  MatT g(n, n), phased(n, n), expg(n, n), u(n, n), next(n, n), tmp(n, n), evolved(n, n);
  MatT phi(n, n), w(n, n), mu_basis(n, n);
  u.setIdentity();

  if (store) {
    store->u_traj.clear();
    store->u_traj.reserve(static_cast<std::size_t>(len) + 1);
    store->u_traj.push_back(u);
    store->mu_traj.assign(static_cast<std::size_t>(nc), {});
    store->mu_avg.assign(static_cast<std::size_t>(nc), {});
    for (auto& per_control : store->mu_traj) per_control.reserve(static_cast<std::size_t>(len));
    for (auto& per_control : store->mu_avg) per_control.reserve(static_cast<std::size_t>(len));
  }

  for (int k = 0; k < len; ++k) {
    if (store) {
      for (int c = 0; c < nc; ++c) {
        tmp.noalias() = mus[static_cast<std::size_t>(c)] * u;
        evolved.noalias() = u.adjoint() * tmp;
        store->mu_traj[static_cast<std::size_t>(c)].push_back(evolved);
      }
    }
    g = h0;
    for (int c = 0; c < nc; ++c) g -= mus[static_cast<std::size_t>(c)] * samples(c, k);
    es.compute(g);
    const auto& v = es.eigenvectors();
    if (store) {
      // Step average of exp(i G tau) mu exp(-i G tau) over the step, exact in
      // the eigenbasis: entry (i, j) picks up phi(i (lambda_i - lambda_j) dt).
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double gap = (es.eigenvalues()[i] - es.eigenvalues()[j]) * dt;
          phi(i, j) = (std::abs(gap) < 1e-12)
                          ? cd(1.0, 0.0)
                          : (std::exp(cd(0.0, gap)) - cd(1.0, 0.0)) / cd(0.0, gap);
        }
      }
      w.noalias() = v.adjoint() * u;  // maps the eigenbasis kernel back through U(t_k)
      for (int c = 0; c < nc; ++c) {
        tmp.noalias() = mus[static_cast<std::size_t>(c)] * v;
        mu_basis.noalias() = v.adjoint() * tmp;
        mu_basis.array() *= phi.array();
        tmp.noalias() = mu_basis * w;
        evolved.noalias() = w.adjoint() * tmp;
        store->mu_avg[static_cast<std::size_t>(c)].push_back(evolved);
      }
    }
    for (int j = 0; j < n; ++j) {
      const double ang = -es.eigenvalues()[j] * dt;
      phased.col(j) = v.col(j) * cd(std::cos(ang), std::sin(ang));
    }
    expg.noalias() = phased * v.adjoint();
    next.noalias() = expg * u;
    u = next;
    if (store) store->u_traj.push_back(u);
  }
  if (u_final) *u_final = u;
}

void dispatch(const QuantumSystem& sys, const ControlField& field,
              PropagationResult* store, Eigen::MatrixXcd* u_final) {
  if (field.n_controls() != sys.n_controls()) {
    throw std::invalid_argument("propagate: field channel count does not match system");
  }
  switch (sys.dim()) {
    case 2: run_product<Eigen::Matrix2cd>(sys, field, store, u_final); break;
    case 3: run_product<Eigen::Matrix3cd>(sys, field, store, u_final); break;
    case 4: run_product<Eigen::Matrix4cd>(sys, field, store, u_final); break;
    case 5: run_product<Eigen::Matrix<cd, 5, 5>>(sys, field, store, u_final); break;
    default: run_product<Eigen::MatrixXcd>(sys, field, store, u_final); break;
  }
}

}  // namespace

PropagationResult propagate(const QuantumSystem& system, const ControlField& field) {
  PropagationResult result;
  dispatch(system, field, &result, nullptr);
  return result;
}

Eigen::MatrixXcd final_unitary(const QuantumSystem& system, const ControlField& field) {
  Eigen::MatrixXcd u;
  dispatch(system, field, nullptr, &u);
  return u;
}

Eigen::MatrixXcd analytic_two_level(const ControlField& field) {
  if (field.n_controls() != 1) {
    throw std::invalid_argument("analytic_two_level: expects a single control channel");
  }
  const double phi = field.samples().sum() * field.dt();
  Eigen::MatrixXcd u(2, 2);
  u << cd(std::cos(phi), 0), cd(0, std::sin(phi)),
       cd(0, std::sin(phi)), cd(std::cos(phi), 0);
  return u;
}

QuantumSystem uncontrollable_two_level() {
  Eigen::MatrixXcd h0 = Eigen::MatrixXcd::Zero(2, 2);
  Eigen::MatrixXcd mu(2, 2);
  mu << cd(0, 0), cd(1, 0),
        cd(1, 0), cd(0, 0);
  return QuantumSystem(std::move(h0), {std::move(mu)});
}

}  // namespace qcland
