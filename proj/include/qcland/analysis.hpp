#pragma once

#include <array>
#include <vector>

#include "qcland/control_field.hpp"

namespace qcland {

/// Straightness metrics of a sampled path: chord-sum length d_P, endpoint
/// distance d_E and their ratio R = d_P / d_E (>= 1 by the triangle
/// inequality; reported as 1 when the endpoints coincide).
struct PathMetrics {
  double path_length = 0.0;
  double endpoint_distance = 0.0;
  double ratio = 1.0;
  std::vector<double> segment_lengths;
  bool degenerate_endpoints = false;
};

PathMetrics ratio_R(const std::vector<ControlField>& path);

/// Top-3 principal directions of a set of fields centered on a reference
/// field, with coordinates c_n^i = <v_n, E_i> in the discrete L2 product and
/// explained-variance percentages from the squared singular values over the
/// full spectrum.
struct PcaProjection {
  std::vector<ControlField> basis;   // three orthonormal field-shaped vectors
  Eigen::MatrixXd coordinates;       // n_fields x 3
  std::array<double, 3> explained_percent{};
  double total_variance = 0.0;
};

PcaProjection pca_project(const std::vector<ControlField>& fields, const ControlField& reference);

/// Distance profile d(s) between two paths sharing endpoints, after both are
/// reparameterized to relative arc length s in [0, 1] by cubic splines and
/// sampled on a uniform grid. mean is the trapezoidal integral of d over
/// [0, 1].
struct PathDistanceProfile {
  std::vector<double> s;
  std::vector<double> d;
  double mean = 0.0;
};

PathDistanceProfile path_distance(const std::vector<ControlField>& path_a,
                                  const std::vector<ControlField>& path_b, int n_samples = 101);

}  // namespace qcland
