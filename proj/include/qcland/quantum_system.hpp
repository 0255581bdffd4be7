#pragma once

#include <Eigen/Dense>
#include <vector>

namespace qcland {

/// Closed N-level system: drift Hamiltonian H0 plus one Hermitian control
/// operator (dipole) per control channel, all N x N. Units with hbar = 1.
class QuantumSystem {
 public:
  /// Validates squareness, matching dimensions and Hermiticity
  /// (Frobenius tolerance 1e-12).
  QuantumSystem(Eigen::MatrixXcd h0, std::vector<Eigen::MatrixXcd> dipoles);

  int dim() const { return static_cast<int>(h0_.rows()); }
  int n_controls() const { return static_cast<int>(dipoles_.size()); }

  const Eigen::MatrixXcd& h0() const { return h0_; }
  const Eigen::MatrixXcd& dipole(int c) const { return dipoles_.at(static_cast<std::size_t>(c)); }
  const std::vector<Eigen::MatrixXcd>& dipoles() const { return dipoles_; }

 private:
  Eigen::MatrixXcd h0_;
  std::vector<Eigen::MatrixXcd> dipoles_;
};

/// Frobenius-norm Hermiticity defect ||A - A^dagger||_F.
double hermiticity_defect(const Eigen::MatrixXcd& a);

/// Frobenius-norm unitarity defect ||U^dagger U - I||_F.
double unitarity_defect(const Eigen::MatrixXcd& u);

}  // namespace qcland
