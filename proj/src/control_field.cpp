#include "qcland/control_field.hpp"

#include <cmath>
#include <stdexcept>

namespace qcland {

ControlField::ControlField(Eigen::ArrayXXd samples, double duration)
    : samples_(std::move(samples)), duration_(duration) {
  if (samples_.rows() < 1) {
    throw std::invalid_argument("ControlField: need at least one control channel");
  }
  if (samples_.cols() < 2) {
    throw std::invalid_argument("ControlField: need at least two time samples");
  }
  if (!(duration_ > 0.0) || !std::isfinite(duration_)) {
    throw std::invalid_argument("ControlField: duration must be positive and finite");
  }
  if (!samples_.allFinite()) {
    throw std::invalid_argument("ControlField: samples must be finite");
  }
}

bool ControlField::same_grid(const ControlField& other) const {
  return n_controls() == other.n_controls() && length() == other.length() &&
         duration_ == other.duration_;
}

ControlField ControlField::zero(int n_controls, int length, double duration) {
  return ControlField(Eigen::ArrayXXd::Zero(n_controls, length), duration);
}

double l2_inner(const Eigen::ArrayXXd& a, const Eigen::ArrayXXd& b, double dt) {
  return (a * b).sum() * dt;
}

double l2_norm(const Eigen::ArrayXXd& a, double dt) {
  return std::sqrt(a.square().sum() * dt);
}

double l2_inner(const ControlField& a, const ControlField& b) {
  require_same_grid(a, b);
  return l2_inner(a.samples(), b.samples(), a.dt());
}

double l2_norm(const ControlField& f) { return l2_norm(f.samples(), f.dt()); }

double l2_distance(const ControlField& a, const ControlField& b) {
  require_same_grid(a, b);
  return l2_norm(Eigen::ArrayXXd(a.samples() - b.samples()), a.dt());
}

double fluence(const ControlField& f) {
  return f.samples().square().sum() * f.dt();
}

ControlField lerp(const ControlField& a, const ControlField& b, double alpha) {
  require_same_grid(a, b);
  return ControlField((1.0 - alpha) * a.samples() + alpha * b.samples(), a.duration());
}

void require_same_grid(const ControlField& a, const ControlField& b) {
  if (!a.same_grid(b)) {
    throw std::invalid_argument("control fields live on different grids");
  }
}

}  // namespace qcland
