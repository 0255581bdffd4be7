#include "qcland/analysis.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "qcland/spline.hpp"

namespace qcland {

PathMetrics ratio_R(const std::vector<ControlField>& path) {
  if (path.size() < 2) {
    throw std::invalid_argument("ratio_R: a path needs at least two fields");
  }
  PathMetrics m;
  m.segment_lengths.reserve(path.size() - 1);
  for (std::size_t i = 1; i < path.size(); ++i) {
    m.segment_lengths.push_back(l2_distance(path[i - 1], path[i]));
    m.path_length += m.segment_lengths.back();
  }
  m.endpoint_distance = l2_distance(path.front(), path.back());
  if (m.endpoint_distance <= 1e-15) {
    m.degenerate_endpoints = true;
    m.ratio = 1.0;
  } else {
    m.ratio = m.path_length / m.endpoint_distance;
  }
  return m;
}

PcaProjection pca_project(const std::vector<ControlField>& fields,
                          const ControlField& reference) {
  if (fields.size() < 4) {
    throw std::invalid_argument("pca_project: need at least four fields");
  }
  for (const auto& f : fields) require_same_grid(f, reference);

  const double dt = reference.dt();
  const double sqrt_dt = std::sqrt(dt);
  const auto rows = reference.samples().rows();
  const auto cols = reference.samples().cols();
  const auto dim = rows * cols;
  const auto n = static_cast<Eigen::Index>(fields.size());
  if (dim < 3) {
    throw std::invalid_argument("pca_project: field dimension below three");
  }

  // Columns are sqrt(dt)-scaled difference vectors, so Euclidean geometry in
  // the scaled space matches the discrete L2 product.
  Eigen::MatrixXd x(dim, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::ArrayXXd diff =
        fields[static_cast<std::size_t>(i)].samples() - reference.samples();
    x.col(i) = Eigen::Map<const Eigen::VectorXd>(diff.data(), dim) * sqrt_dt;
  }

  const double total = x.squaredNorm();
  if (!(total > 1e-24)) {
    throw std::invalid_argument("pca_project: degenerate all-identical input");
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU);
  PcaProjection out;
  out.total_variance = total;
  for (int k = 0; k < 3; ++k) {
    const double sigma = (k < svd.singularValues().size()) ? svd.singularValues()(k) : 0.0;
    out.explained_percent[static_cast<std::size_t>(k)] = 100.0 * sigma * sigma / total;
    Eigen::ArrayXXd v = Eigen::ArrayXXd::Zero(rows, cols);
    if (k < svd.matrixU().cols()) {
      v = Eigen::Map<const Eigen::ArrayXXd>(svd.matrixU().col(k).data(), rows, cols) / sqrt_dt;
    }
    out.basis.push_back(ControlField(std::move(v), reference.duration()));
  }

  out.coordinates.resize(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < 3; ++k) {
      out.coordinates(i, k) =
          l2_inner(out.basis[static_cast<std::size_t>(k)], fields[static_cast<std::size_t>(i)]);
    }
  }
  return out;
}

namespace {

// Spline over relative arc length; collapses coincident consecutive points.
class PathInterpolant {
 public:
  explicit PathInterpolant(const std::vector<ControlField>& path)
      : rows_(path.front().samples().rows()),
        cols_(path.front().samples().cols()),
        constant_(path.front()) {
    std::vector<double> sigma{0.0};
    std::vector<const ControlField*> kept{&path.front()};
    for (std::size_t i = 1; i < path.size(); ++i) {
      const double chord = l2_distance(*kept.back(), path[i]);
      if (chord > 1e-15) {
        sigma.push_back(sigma.back() + chord);
        kept.push_back(&path[i]);
      }
    }
    if (kept.size() < 2) return;  // degenerate path, stays constant
    const double total = sigma.back();
    Eigen::MatrixXd y(static_cast<Eigen::Index>(kept.size()), rows_ * cols_);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      sigma[i] /= total;
      y.row(static_cast<Eigen::Index>(i)) =
          Eigen::Map<const Eigen::VectorXd>(kept[i]->samples().data(), rows_ * cols_).transpose();
    }
    spline_.emplace(std::move(sigma), std::move(y));
  }

  Eigen::ArrayXXd at(double s) const {
    if (!spline_) return constant_.samples();
    const Eigen::VectorXd v = (*spline_)(s);
    return Eigen::Map<const Eigen::ArrayXXd>(v.data(), rows_, cols_);
  }

 private:
  Eigen::Index rows_, cols_;
  ControlField constant_;
  std::optional<CubicSpline> spline_;
};

}  // namespace

PathDistanceProfile path_distance(const std::vector<ControlField>& path_a,
                                  const std::vector<ControlField>& path_b, int n_samples) {
  if (path_a.size() < 2 || path_b.size() < 2) {
    throw std::invalid_argument("path_distance: each path needs at least two fields");
  }
  if (n_samples < 2) {
    throw std::invalid_argument("path_distance: need at least two samples");
  }
  require_same_grid(path_a.front(), path_b.front());
  const double scale = std::max({1.0, l2_norm(path_a.front()), l2_norm(path_a.back())});
  if (l2_distance(path_a.front(), path_b.front()) > 1e-6 * scale ||
      l2_distance(path_a.back(), path_b.back()) > 1e-6 * scale) {
    throw std::invalid_argument("path_distance: paths must share endpoints");
  }

  const PathInterpolant interp_a(path_a);
  const PathInterpolant interp_b(path_b);
  const double dt = path_a.front().dt();

  PathDistanceProfile profile;
  profile.s.resize(static_cast<std::size_t>(n_samples));
  profile.d.resize(static_cast<std::size_t>(n_samples));
  for (int j = 0; j < n_samples; ++j) {
    const double s = static_cast<double>(j) / (n_samples - 1);
    profile.s[static_cast<std::size_t>(j)] = s;
    const Eigen::ArrayXXd diff = interp_a.at(s) - interp_b.at(s);
    profile.d[static_cast<std::size_t>(j)] = l2_norm(diff, dt);
  }
  const double ds = 1.0 / (n_samples - 1);
  double acc = 0.0;
  for (int j = 0; j + 1 < n_samples; ++j) {
    acc += 0.5 * ds *
           (profile.d[static_cast<std::size_t>(j)] + profile.d[static_cast<std::size_t>(j) + 1]);
  }
  profile.mean = acc;
  return profile;
}

}  // namespace qcland
