#include "qcland/quantum_system.hpp"

#include <stdexcept>

namespace qcland {

namespace {
constexpr double kHermitianTol = 1e-12;
}

QuantumSystem::QuantumSystem(Eigen::MatrixXcd h0, std::vector<Eigen::MatrixXcd> dipoles)
    : h0_(std::move(h0)), dipoles_(std::move(dipoles)) {
  const auto n = h0_.rows();
  if (n < 2 || h0_.cols() != n) {
    throw std::invalid_argument("QuantumSystem: H0 must be square with dim >= 2");
  }
  if (dipoles_.empty()) {
    throw std::invalid_argument("QuantumSystem: need at least one control operator");
  }
  if (hermiticity_defect(h0_) > kHermitianTol) {
    throw std::invalid_argument("QuantumSystem: H0 is not Hermitian");
  }
  for (const auto& mu : dipoles_) {
    if (mu.rows() != n || mu.cols() != n) {
      throw std::invalid_argument("QuantumSystem: control operator dimension mismatch");
    }
    if (hermiticity_defect(mu) > kHermitianTol) {
      throw std::invalid_argument("QuantumSystem: control operator is not Hermitian");
    }
  }
}

double hermiticity_defect(const Eigen::MatrixXcd& a) {
  return (a - a.adjoint()).norm();
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).norm();
}

}  // namespace qcland
