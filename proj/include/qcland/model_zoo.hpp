#pragma once

#include <cstdint>
#include <string>

#include "qcland/climb.hpp"
#include "qcland/objective.hpp"
#include "qcland/quantum_system.hpp"

namespace qcland {

/// A benchmark system with its three landscape objectives, time grid and
/// initial-field sampling ranges.
struct Preset {
  std::string name;
  QuantumSystem system;
  Objective stl;
  Objective ocl;
  Objective utl;
  double duration;
  int grid_points;
  InitialFieldSpec field_spec;  // frequency range etc.; seed filled per trial

  const Objective& objective(Objective::Kind kind) const;
  const Objective& objective_by_name(const std::string& landscape) const;  // "stl"|"ocl"|"utl"
};

/// Known names: "fourlevel", "fivelevel", "two_spin". variant_seed fixes the
/// random ingredients of the fivelevel preset (dipole sign pattern and the
/// Hermitian generator of the target gate); the other presets ignore it.
Preset load_preset(const std::string& name, std::uint64_t variant_seed = 1);

/// Seeded Hermitian matrix with standard-normal real/imaginary parts and the
/// trace projected out.
Eigen::MatrixXcd random_traceless_hermitian(int n, std::uint64_t seed);

/// exp(i G) for Hermitian G, via eigendecomposition.
Eigen::MatrixXcd unitary_from_hermitian_generator(const Eigen::MatrixXcd& g);

}  // namespace qcland
