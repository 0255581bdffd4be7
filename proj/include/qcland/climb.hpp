#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qcland/control_field.hpp"
#include "qcland/objective.hpp"
#include "qcland/quantum_system.hpp"

namespace qcland {

/// Random trial fields E(t) = A sum_m a_m cos(w_m t + phi_m) per channel,
/// rescaled so the total fluence hits the requested value exactly.
struct InitialFieldSpec {
  int n_components = 100;
  double amplitude_lo = 0.0;
  double amplitude_hi = 1.0;
  double phase_lo = 0.0;
  double phase_hi = 6.283185307179586476925286766559;  // 2 pi
  double freq_lo = 0.5;
  double freq_hi = 5.5;
  double target_fluence = 1.0;
  /// When set, the fluence is drawn per field with log10 F0 ~ U[lo, hi]
  /// (broad-region sampling mode) instead of target_fluence.
  std::optional<std::pair<double, double>> log10_fluence_range;
  std::uint64_t rng_seed = 0;
};

ControlField sample_initial_field(const InitialFieldSpec& spec, double duration, int length,
                                  int n_controls);

/// Normalized gradient flow dE/ds = grad / max(||grad||, floor), integrated
/// with an embedded adaptive Runge-Kutta 5(4) pair. s measures arc length in
/// the field L2 metric.
struct ClimbParams {
  double epsilon = 1e-3;             // stop when J >= 1 - epsilon
  double max_s = 1000.0;
  long max_gradient_evals = 100000;  // failure budget
  double rtol = 1e-6;
  double atol = 1e-9;
  double gradient_floor = 1e-8;
};

struct ClimbReport {
  ControlField field;                                 // final field
  std::vector<std::pair<double, double>> j_history;   // (s, J) at accepted steps
  double s_reached = 0.0;
  bool converged = false;
  long gradient_evals = 0;
  long steps = 0;

  double final_j() const { return j_history.empty() ? 0.0 : j_history.back().second; }
};

ClimbReport climb(const QuantumSystem& system, const Objective& objective,
                  const ControlField& start, const ClimbParams& params = {});

/// All distances ||E_i - E_j||_2, i < j, in lexicographic pair order.
std::vector<double> pairwise_distances(const std::vector<ControlField>& pool);

}  // namespace qcland
