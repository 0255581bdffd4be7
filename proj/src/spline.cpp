#include "qcland/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace qcland {

CubicSpline::CubicSpline(std::vector<double> x, Eigen::MatrixXd y)
    : x_(std::move(x)), y_(std::move(y)) {
  const auto n = static_cast<Eigen::Index>(x_.size());
  if (n < 2 || y_.rows() != n) {
    throw std::invalid_argument("CubicSpline: need >= 2 knots and matching values");
  }
  for (std::size_t i = 1; i < x_.size(); ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw std::invalid_argument("CubicSpline: knots must be strictly increasing");
    }
  }

  m_ = Eigen::MatrixXd::Zero(n, y_.cols());
  if (n == 2) return;  // linear segment, natural spline has zero curvature

  // Tridiagonal system for interior second derivatives (natural boundaries),
  // solved once for all coordinate columns via the Thomas algorithm.
  const auto interior = n - 2;
  Eigen::VectorXd diag(interior), lower(interior), upper(interior);
  Eigen::MatrixXd rhs(interior, y_.cols());
  for (Eigen::Index i = 0; i < interior; ++i) {
    const double h0 = x_[static_cast<std::size_t>(i) + 1] - x_[static_cast<std::size_t>(i)];
    const double h1 = x_[static_cast<std::size_t>(i) + 2] - x_[static_cast<std::size_t>(i) + 1];
    lower(i) = h0 / 6.0;
    diag(i) = (h0 + h1) / 3.0;
    upper(i) = h1 / 6.0;
    rhs.row(i) = (y_.row(i + 2) - y_.row(i + 1)) / h1 - (y_.row(i + 1) - y_.row(i)) / h0;
  }
  for (Eigen::Index i = 1; i < interior; ++i) {
    const double w = lower(i) / diag(i - 1);
    diag(i) -= w * upper(i - 1);
    rhs.row(i) -= w * rhs.row(i - 1);
  }
  m_.row(interior) = rhs.row(interior - 1) / diag(interior - 1);
  for (Eigen::Index i = interior - 2; i >= 0; --i) {
    m_.row(i + 1) = (rhs.row(i) - upper(i) * m_.row(i + 2)) / diag(i);
  }
}

Eigen::VectorXd CubicSpline::operator()(double q) const {
  q = std::clamp(q, x_.front(), x_.back());
  const auto it = std::upper_bound(x_.begin(), x_.end(), q);
  const auto seg = std::clamp<std::ptrdiff_t>(it - x_.begin() - 1, 0,
                                              static_cast<std::ptrdiff_t>(x_.size()) - 2);
  const auto i = static_cast<Eigen::Index>(seg);
  const double h = x_[static_cast<std::size_t>(seg) + 1] - x_[static_cast<std::size_t>(seg)];
  const double a = (x_[static_cast<std::size_t>(seg) + 1] - q) / h;
  const double b = (q - x_[static_cast<std::size_t>(seg)]) / h;
  return a * y_.row(i).transpose() + b * y_.row(i + 1).transpose() +
         ((a * a * a - a) * m_.row(i).transpose() + (b * b * b - b) * m_.row(i + 1).transpose()) *
             (h * h) / 6.0;
}

}  // namespace qcland
