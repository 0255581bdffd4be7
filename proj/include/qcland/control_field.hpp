#pragma once

#include <Eigen/Dense>

namespace qcland {

/// Real-valued control field(s) sampled on a uniform time grid over [0, T].
///
/// Sample (c, k) is the amplitude of channel c on the interval
/// [t_k, t_{k+1}) with t_k = k * dt and dt = T / L (left-point convention).
/// The discrete L2 norm sqrt(sum E^2 dt) is the metric used for every
/// distance, fluence and inner product in the toolkit.
class ControlField {
 public:
  /// samples: n_controls x L, all finite; duration: T > 0; L >= 2.
  ControlField(Eigen::ArrayXXd samples, double duration);

  int n_controls() const { return static_cast<int>(samples_.rows()); }
  int length() const { return static_cast<int>(samples_.cols()); }
  double duration() const { return duration_; }
  double dt() const { return duration_ / static_cast<double>(samples_.cols()); }

  const Eigen::ArrayXXd& samples() const { return samples_; }
  Eigen::ArrayXXd& samples() { return samples_; }

  /// Two fields are comparable only if n_controls, L and T agree.
  bool same_grid(const ControlField& other) const;

  static ControlField zero(int n_controls, int length, double duration);

 private:
  Eigen::ArrayXXd samples_;  // n_controls x L
  double duration_;
};

/// Discrete L2 inner product sum_{c,k} a[c,k] b[c,k] dt on raw sample arrays.
double l2_inner(const Eigen::ArrayXXd& a, const Eigen::ArrayXXd& b, double dt);
double l2_norm(const Eigen::ArrayXXd& a, double dt);

double l2_inner(const ControlField& a, const ControlField& b);
double l2_norm(const ControlField& f);
double l2_distance(const ControlField& a, const ControlField& b);

/// Fluence F = sum E^2 dt = ||E||_2^2; zero iff the field is identically zero.
double fluence(const ControlField& f);

/// (1 - alpha) * a + alpha * b on a shared grid.
ControlField lerp(const ControlField& a, const ControlField& b, double alpha);

void require_same_grid(const ControlField& a, const ControlField& b);

}  // namespace qcland
