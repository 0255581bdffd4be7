#include "qcland/string_method.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qcland/rng.hpp"
#include "qcland/spline.hpp"

namespace qcland {

std::string to_string(StringStatus status) {
  switch (status) {
    case StringStatus::Running: return "running";
    case StringStatus::Converged: return "converged";
    case StringStatus::Failed: return "failed";
  }
  return "unknown";
}

StringState init_straight(const ControlField& start, const ControlField& target, int n_st0) {
  require_same_grid(start, target);
  if (n_st0 < 1) throw std::invalid_argument("init_straight: need at least one segment");
  StringState state;
  state.images.reserve(static_cast<std::size_t>(n_st0) + 1);
  state.images.push_back(start);
  for (int i = 1; i < n_st0; ++i) {
    state.images.push_back(lerp(start, target, static_cast<double>(i) / n_st0));
  }
  state.images.push_back(target);
  state.j_values.assign(state.images.size(), std::numeric_limits<double>::quiet_NaN());
  return state;
}

double arc_central_angle(double target_ratio) {
  if (!(target_ratio > 1.0)) {
    throw std::invalid_argument("arc_central_angle: ratio must exceed 1");
  }
  // (2 pi - theta) / (2 sin(theta/2)) decreases from +inf to 1 on (0, 2 pi).
  const double two_pi = 2.0 * std::numbers::pi;
  auto ratio_of = [two_pi](double theta) {
    return (two_pi - theta) / (2.0 * std::sin(theta / 2.0));
  };
  double lo = 1e-12, hi = two_pi - 1e-12;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ratio_of(mid) > target_ratio) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

StringState init_arc(const ControlField& start, const ControlField& target, double target_ratio,
                     std::uint64_t plane_seed, int n_st0) {
  require_same_grid(start, target);
  if (n_st0 < 1) throw std::invalid_argument("init_arc: need at least one segment");
  const double chord = l2_distance(start, target);
  if (chord < 1e-12) {
    throw std::invalid_argument("init_arc: endpoints must be distinct");
  }
  const double theta = arc_central_angle(target_ratio);
  const double dt = start.dt();
  const double radius = chord / (2.0 * std::sin(theta / 2.0));
  const double center_offset = radius * std::cos(theta / 2.0);  // signed

  const Eigen::ArrayXXd& a = start.samples();
  const Eigen::ArrayXXd& b = target.samples();
  const Eigen::ArrayXXd e1 = (b - a) / chord;

  // Random in-plane direction orthogonal to the chord.
  auto engine = make_engine(plane_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::ArrayXXd e2(a.rows(), a.cols());
  for (int attempt = 0; attempt < 64; ++attempt) {
    for (Eigen::Index c = 0; c < e2.rows(); ++c) {
      for (Eigen::Index k = 0; k < e2.cols(); ++k) e2(c, k) = normal(engine);
    }
    e2 -= l2_inner(e2, e1, dt) * e1;
    const double n = l2_norm(e2, dt);
    if (n > 1e-9) {
      e2 /= n;
      break;
    }
    if (attempt == 63) throw std::runtime_error("init_arc: degenerate plane draw");
  }

  const Eigen::ArrayXXd center = 0.5 * (a + b) + center_offset * e2;
  const Eigen::ArrayXXd oa = a - center;
  const Eigen::ArrayXXd p = oa / l2_norm(oa, dt);
  Eigen::ArrayXXd q = e1 - l2_inner(e1, p, dt) * p;
  q /= l2_norm(q, dt);

  const Eigen::ArrayXXd ob = b - center;
  const double phi_b = std::atan2(l2_inner(ob, q, dt), l2_inner(ob, p, dt));
  const double sweep = -(phi_b >= 0 ? 1.0 : -1.0) * (2.0 * std::numbers::pi - theta);

  StringState state;
  state.images.reserve(static_cast<std::size_t>(n_st0) + 1);
  state.images.push_back(start);
  for (int i = 1; i < n_st0; ++i) {
    const double phi = sweep * static_cast<double>(i) / n_st0;
    Eigen::ArrayXXd point = center + radius * std::cos(phi) * p + radius * std::sin(phi) * q;
    state.images.push_back(ControlField(std::move(point), start.duration()));
  }
  state.images.push_back(target);
  state.j_values.assign(state.images.size(), std::numeric_limits<double>::quiet_NaN());
  return state;
}

void redistribute_equal_arclength(std::vector<ControlField>& images) {
  const auto n_img = images.size();
  if (n_img < 3) return;
  const double dt = images.front().dt();
  const auto rows = images.front().samples().rows();
  const auto cols = images.front().samples().cols();
  const auto dim = rows * cols;

  for (int pass = 0; pass < 3; ++pass) {
    std::vector<double> sigma(n_img, 0.0);
    double max_chord = 0.0;
    for (std::size_t i = 1; i < n_img; ++i) {
      const double chord = l2_distance(images[i - 1], images[i]);
      sigma[i] = sigma[i - 1] + chord;
      max_chord = std::max(max_chord, chord);
    }
    const double total = sigma.back();
    if (!(total > 0.0) || max_chord < 1e-12) return;

    // Guard against coincident knots (spline needs strictly increasing x).
    bool increasing = true;
    for (std::size_t i = 1; i < n_img; ++i) {
      if (!(sigma[i] > sigma[i - 1])) {
        increasing = false;
        break;
      }
    }
    if (!increasing) return;

    Eigen::MatrixXd y(static_cast<Eigen::Index>(n_img), dim);
    for (std::size_t i = 0; i < n_img; ++i) {
      y.row(static_cast<Eigen::Index>(i)) =
          Eigen::Map<const Eigen::VectorXd>(images[i].samples().data(), dim).transpose();
    }
    const CubicSpline spline(sigma, std::move(y));
    for (std::size_t i = 1; i + 1 < n_img; ++i) {
      const double target = total * static_cast<double>(i) / static_cast<double>(n_img - 1);
      const Eigen::VectorXd v = spline(target);
      Eigen::ArrayXXd samples =
          Eigen::Map<const Eigen::ArrayXXd>(v.data(), rows, cols);
      images[i] = ControlField(std::move(samples), images[i].duration());
    }

    // Stop once adjacent chords agree to 1% relative spread.
    double lo = std::numeric_limits<double>::max(), hi = 0.0, sum = 0.0;
    for (std::size_t i = 1; i < n_img; ++i) {
      const double chord = l2_distance(images[i - 1], images[i]);
      lo = std::min(lo, chord);
      hi = std::max(hi, chord);
      sum += chord;
    }
    const double mean = sum / static_cast<double>(n_img - 1);
    if (mean <= 0.0 || (hi - lo) / mean <= 0.01) return;
  }
}

namespace {

// One fixed-step RK4 update of the normalized gradient flow.
Eigen::ArrayXXd ascent_rk4(const QuantumSystem& system, const Objective& objective,
                           const Eigen::ArrayXXd& y, double duration, double h, double floor,
                           long& propagations) {
  auto dir = [&](const Eigen::ArrayXXd& state) {
    const ControlField field(state, duration);
    const Evaluation ev = evaluate(system, objective, field);
    ++propagations;
    Eigen::ArrayXXd gamma = ev.gradient.values / field.dt();
    gamma /= std::max(l2_norm(gamma, field.dt()), floor);
    return gamma;
  };
  const Eigen::ArrayXXd k1 = dir(y);
  const Eigen::ArrayXXd k2 = dir(y + (0.5 * h) * k1);
  const Eigen::ArrayXXd k3 = dir(y + (0.5 * h) * k2);
  const Eigen::ArrayXXd k4 = dir(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct GapScan {
  double worst_gap = -std::numeric_limits<double>::infinity();
  std::size_t segment = 0;
  double alpha = 0.0;
  double j_at_worst = 0.0;
};

GapScan scan_gaps(const QuantumSystem& system, const Objective& objective,
                  const StringState& state, int grid_points, long& propagations) {
  GapScan scan;
  for (std::size_t i = 0; i + 1 < state.images.size(); ++i) {
    for (int g = 1; g <= grid_points; ++g) {
      const double alpha = static_cast<double>(g) / (grid_points + 1);
      const ControlField probe = lerp(state.images[i], state.images[i + 1], alpha);
      const double j_actual = evaluate_value(system, objective, probe);
      ++propagations;
      const double j_interp = (1.0 - alpha) * state.j_values[i] + alpha * state.j_values[i + 1];
      const double gap = j_interp - j_actual;
      if (gap > scan.worst_gap) {
        scan = GapScan{gap, i, alpha, j_actual};
      }
    }
  }
  return scan;
}

}  // namespace

StringState relax(const QuantumSystem& system, const Objective& objective, StringState state,
                  const StringParams& params) {
  if (state.images.size() < 2) {
    throw std::invalid_argument("relax: string needs at least two images");
  }
  const double duration = state.images.front().duration();
  const double j_top = 1.0 - params.epsilon_st;
  long propagations = 0;

  auto refresh_j = [&](bool endpoints_too) {
    for (std::size_t i = 0; i < state.images.size(); ++i) {
      const bool endpoint = (i == 0 || i + 1 == state.images.size());
      if (endpoint && !endpoints_too) continue;
      state.j_values[i] = evaluate_value(system, objective, state.images[i]);
      ++propagations;
    }
  };
  refresh_j(true);

  if (state.j_values.front() < j_top || state.j_values.back() < j_top) {
    state.status = StringStatus::Failed;
    state.failure_reason = "endpoint below top manifold";
    return state;
  }

  while (state.iterations < params.max_iterations) {
    // (II) one ascent step for every interior image still below the top.
    for (std::size_t i = 1; i + 1 < state.images.size(); ++i) {
      if (state.j_values[i] >= j_top) continue;
      Eigen::ArrayXXd next =
          ascent_rk4(system, objective, state.images[i].samples(), duration, params.ascent_step,
                     params.gradient_floor, propagations);
      state.images[i] = ControlField(std::move(next), duration);
    }

    // (III) equal-arc-length redistribution, then refresh interior values.
    redistribute_equal_arclength(state.images);
    refresh_j(false);

    // (IV) insert one image at the single worst interpolation gap.
    GapScan scan = scan_gaps(system, objective, state, params.insertion_points, propagations);
    bool inserted = false;
    if (scan.worst_gap > params.epsilon_st) {
      if (state.n_segments() + 1 > params.max_images) {
        state.status = StringStatus::Failed;
        state.failure_reason = "image cap exceeded";
        ++state.iterations;
        return state;
      }
      const ControlField new_image =
          lerp(state.images[scan.segment], state.images[scan.segment + 1], scan.alpha);
      state.images.insert(state.images.begin() + static_cast<std::ptrdiff_t>(scan.segment) + 1,
                          new_image);
      state.j_values.insert(state.j_values.begin() + static_cast<std::ptrdiff_t>(scan.segment) + 1,
                            scan.j_at_worst);
      redistribute_equal_arclength(state.images);
      refresh_j(false);
      inserted = true;
    }

    ++state.iterations;

    // (V) converged once every image is in the top manifold and the string
    // resolution is certified by the gap scan.
    if (!inserted) {
      bool all_top = true;
      for (const double j : state.j_values) {
        if (j < j_top) {
          all_top = false;
          break;
        }
      }
      if (all_top) {
        state.status = StringStatus::Converged;
        return state;
      }
    }
  }

  state.status = StringStatus::Failed;
  state.failure_reason = "iteration limit reached";
  return state;
}

}  // namespace qcland
