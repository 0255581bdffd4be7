#pragma once

#include <Eigen/Dense>
#include <vector>

namespace qcland {

/// Natural cubic spline through (x_i, y_i) with vector-valued y (one column
/// per coordinate). Used for string redistribution and for reparameterizing
/// paths to relative arc length.
class CubicSpline {
 public:
  /// x strictly increasing, y has x.size() rows.
  CubicSpline(std::vector<double> x, Eigen::MatrixXd y);

  /// Evaluate all coordinates at q (clamped to [x_front, x_back]).
  Eigen::VectorXd operator()(double q) const;

  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

 private:
  std::vector<double> x_;
  Eigen::MatrixXd y_;   // values, one row per knot
  Eigen::MatrixXd m_;   // second derivatives, one row per knot
};

}  // namespace qcland
