#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcland/control_field.hpp"
#include "qcland/objective.hpp"
#include "qcland/quantum_system.hpp"

namespace qcland {

struct StringParams {
  double epsilon_st = 1e-3;   // top tolerance and insertion gap threshold
  double ascent_step = 0.05;  // h for the single RK4 ascent step per image
  int max_iterations = 1000;
  int insertion_points = 9;   // alpha grid {0.1, ..., 0.9}
  int max_images = 256;       // hard cap on N_st
  double gradient_floor = 1e-8;
};

enum class StringStatus { Running, Converged, Failed };
std::string to_string(StringStatus status);

/// A discretized path of N_st + 1 control fields with pinned endpoints.
struct StringState {
  std::vector<ControlField> images;
  std::vector<double> j_values;  // NaN until relax evaluates them
  int iterations = 0;
  StringStatus status = StringStatus::Running;
  std::string failure_reason;

  int n_segments() const { return static_cast<int>(images.size()) - 1; }
};

/// Straight-line initialization: image i is the convex combination
/// (1 - i/N) start + (i/N) target.
StringState init_straight(const ControlField& start, const ControlField& target, int n_st0);

/// Central angle theta of the minor arc such that the major arc of a circle
/// through both endpoints has arc/chord ratio R: (2 pi - theta) / (2 sin(theta/2)) = R.
/// Defined for R > 1.
double arc_central_angle(double target_ratio);

/// Samples the major arc of a circle through start and target lying in the
/// plane spanned by (target - start) and a seeded random direction
/// orthogonalized against it. The polyline ratio approaches target_ratio as
/// n_st0 grows.
StringState init_arc(const ControlField& start, const ControlField& target, double target_ratio,
                     std::uint64_t plane_seed, int n_st0);

/// Equal-arc-length redistribution of the interior images along the string
/// via natural-cubic-spline reparameterization over the cumulative chord
/// parameter. Endpoints are left untouched.
void redistribute_equal_arclength(std::vector<ControlField>& images);

/// String relaxation: per iteration every interior image below the top takes
/// one fixed-step RK4 gradient-ascent step, images are redistributed to equal
/// arc length, and at most one image is inserted at the worst interpolation
/// gap. Converges when every image satisfies J >= 1 - epsilon_st and no gap
/// on the insertion grid exceeds epsilon_st.
StringState relax(const QuantumSystem& system, const Objective& objective, StringState state,
                  const StringParams& params);

}  // namespace qcland
