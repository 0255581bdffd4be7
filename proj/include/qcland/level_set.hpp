#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcland/climb.hpp"
#include "qcland/control_field.hpp"
#include "qcland/objective.hpp"
#include "qcland/quantum_system.hpp"

namespace qcland {

/// Removes the component of f along grad in the discrete L2 inner product:
/// returns f - (<grad, f> / <grad, grad>) grad. The result is orthogonal to
/// grad, and re-projection is a no-op. Scale-invariant in grad.
/// Throws std::domain_error when ||grad|| vanishes.
Eigen::ArrayXXd project_out_gradient(const Eigen::ArrayXXd& grad, const Eigen::ArrayXXd& f,
                                     double dt);

enum class ConnectOutcome { ReachedTarget, Trapped, BudgetExhausted };
std::string to_string(ConnectOutcome outcome);

/// Level-set motion parameters. Fixed nominal step in s with rejection +
/// halving when one step loses more than epsilon_dm / 10 of J; a trajectory
/// that still falls below J(0) - epsilon_dm is pushed back up by the climber
/// before motion resumes. max_propagations counts every propagation of the
/// Schroedinger equation (gradient stages, value checks and recoveries).
struct LevelSetParams {
  double epsilon = 1e-3;
  double epsilon_dm = 1e-3;
  double tau1 = 1e-4;        // trapped when the projected step norm drops below
  double tau2_rel = 1e-2;    // arrival radius = max(tau2_rel * d_E, tau2_floor)
  double tau2_floor = 1e-3;
  double step_size = 1e-2;   // nominal h in s
  long max_propagations = 100000;
  int record_stride = 10;    // path snapshot every k-th accepted step
  double gradient_floor = 1e-8;
  ClimbParams recovery;      // fall-off re-ascent settings (epsilon reused)
};

/// One accepted level-set step. `metric` is D(s) = ||E_target - E||^2 for
/// connects and D_far(s) = ||E - E_origin||^2 for walks. Records flagged
/// post_recovery follow a re-ascent, so monotonicity comparisons restart
/// there.
struct StepRecord {
  double s;
  double metric;
  double j;
  bool post_recovery;
};

struct WindowStats {
  int index;
  double path_length;
  double ratio;
  bool trapped;
};

struct ConnectReport {
  std::vector<ControlField> path;    // recorded fields, endpoints included
  std::vector<StepRecord> history;   // one entry per accepted step
  ConnectOutcome outcome = ConnectOutcome::BudgetExhausted;
  bool near_target = false;          // arrival without a certified final hop
  double path_length = 0.0;          // d_P at step resolution
  double endpoint_distance = 0.0;    // d_E between first and last path field
  double ratio = 1.0;                // R = d_P / d_E (1 when d_E = 0)
  int recoveries = 0;
  long propagations = 0;
  double s_end = 0.0;
  double j_min_recorded = 1.0;
  double final_fluence = 0.0;
  std::vector<WindowStats> windows;  // stochastic exploration only
};

/// Moves E_start toward E_target inside the level set J = J(0) via
/// dE/ds = [1 - P] (E_target - E)/||E_target - E||. D(s) decreases
/// monotonically across accepted steps. Both endpoints must satisfy
/// J >= 1 - epsilon.
ConnectReport connect_dmorph(const QuantumSystem& system, const Objective& objective,
                             const ControlField& start, const ControlField& target,
                             const LevelSetParams& params);

struct FarWalkParams {
  LevelSetParams base;
  double fluence_cap = 1e3;
  std::uint64_t direction_seed = 0;
};

/// Walks away from E_start along dE/ds = [1 - P] (E - E_start)/||E - E_start||
/// (seeded random initial direction) until the fluence exceeds the cap.
/// D_far(s) is non-decreasing across accepted steps.
ConnectReport walk_far(const QuantumSystem& system, const Objective& objective,
                       const ControlField& start, const FarWalkParams& params);

struct ExploreParams {
  LevelSetParams base;
  double window = 1.0;  // delta s per guiding draw
  int n_windows = 100;
  std::uint64_t seed = 0;
};

/// Stochastic exploration: the guiding function is a fresh normalized white-
/// noise field per window of length `window`, held fixed within the window.
ConnectReport explore_stochastic(const QuantumSystem& system, const Objective& objective,
                                 const ControlField& start, const ExploreParams& params);

}  // namespace qcland
