#include "qcland/climb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcland/rng.hpp"

namespace qcland {
namespace {

struct FlowEval {
  Eigen::ArrayXXd direction;  // grad / max(||grad||, floor), unit L2 norm
  double j = 0.0;
  double gradient_norm = 0.0;
};

FlowEval flow_eval(const QuantumSystem& system, const Objective& objective,
                   const Eigen::ArrayXXd& samples, double duration, double floor) {
  const ControlField field(samples, duration);
  const Evaluation ev = evaluate(system, objective, field);
  const double dt = field.dt();
  // The functional gradient is the stored discrete gradient divided by dt.
  Eigen::ArrayXXd gamma = ev.gradient.values / dt;
  const double norm = l2_norm(gamma, dt);
  gamma /= std::max(norm, floor);
  return FlowEval{std::move(gamma), ev.value, norm};
}

// Dormand-Prince 5(4) tableau (FSAL).
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = kB1 - 5179.0 / 57600, kE3 = kB3 - 7571.0 / 16695,
                 kE4 = kB4 - 393.0 / 640, kE5 = kB5 + 92097.0 / 339200,
                 kE6 = kB6 - 187.0 / 2100, kE7 = -1.0 / 40;

}  // namespace

ControlField sample_initial_field(const InitialFieldSpec& spec, double duration, int length,
                                  int n_controls) {
  if (spec.n_components < 1) {
    throw std::invalid_argument("sample_initial_field: need at least one component");
  }
  if (!(spec.freq_lo < spec.freq_hi)) {
    throw std::invalid_argument("sample_initial_field: empty frequency range");
  }
  if (!spec.log10_fluence_range && !(spec.target_fluence > 0.0)) {
    throw std::invalid_argument("sample_initial_field: target fluence must be positive");
  }

  auto engine = make_engine(spec.rng_seed);
  std::uniform_real_distribution<double> amp(spec.amplitude_lo, spec.amplitude_hi);
  std::uniform_real_distribution<double> freq(spec.freq_lo, spec.freq_hi);
  std::uniform_real_distribution<double> phase(spec.phase_lo, spec.phase_hi);

  double target = spec.target_fluence;
  if (spec.log10_fluence_range) {
    std::uniform_real_distribution<double> log10f(spec.log10_fluence_range->first,
                                                  spec.log10_fluence_range->second);
    target = std::pow(10.0, log10f(engine));
  }

  const double dt = duration / length;
  Eigen::ArrayXXd samples = Eigen::ArrayXXd::Zero(n_controls, length);
  Eigen::ArrayXd t(length);
  for (int k = 0; k < length; ++k) t(k) = k * dt;

  for (int c = 0; c < n_controls; ++c) {
    for (int m = 0; m < spec.n_components; ++m) {
      const double a = amp(engine);
      const double w = freq(engine);
      const double p = phase(engine);
      samples.row(c) += a * (w * t + p).cos().transpose();
    }
  }

  const double raw = samples.square().sum() * dt;
  if (!(raw > 0.0)) {
    throw std::runtime_error("sample_initial_field: degenerate zero draw");
  }
  samples *= std::sqrt(target / raw);
  return ControlField(std::move(samples), duration);
}

ClimbReport climb(const QuantumSystem& system, const Objective& objective,
                  const ControlField& start, const ClimbParams& params) {
  if (!(params.epsilon > 0.0) || params.epsilon >= 0.5) {
    throw std::invalid_argument("climb: epsilon must lie in (0, 0.5)");
  }
  const double duration = start.duration();
  const double j_stop = 1.0 - params.epsilon;

  ClimbReport report{start};
  const double j0 = evaluate_value(system, objective, start);
  report.j_history.emplace_back(0.0, j0);
  if (j0 >= j_stop) {
    report.converged = true;
    return report;
  }

  Eigen::ArrayXXd y = start.samples();
  FlowEval k1 = flow_eval(system, objective, y, duration, params.gradient_floor);
  report.gradient_evals = 1;

  double h = 0.02;
  constexpr double kMinStep = 1e-10, kMaxStep = 2.0;
  double s = 0.0;

  Eigen::ArrayXXd y2, y3, y4, y5, y6, y_next, err;
  while (s < params.max_s && report.gradient_evals + 6 <= params.max_gradient_evals) {
    y2 = y + h * (kA21 * k1.direction);
    const FlowEval k2 = flow_eval(system, objective, y2, duration, params.gradient_floor);
    y3 = y + h * (kA31 * k1.direction + kA32 * k2.direction);
    const FlowEval k3 = flow_eval(system, objective, y3, duration, params.gradient_floor);
    y4 = y + h * (kA41 * k1.direction + kA42 * k2.direction + kA43 * k3.direction);
    const FlowEval k4 = flow_eval(system, objective, y4, duration, params.gradient_floor);
    y5 = y + h * (kA51 * k1.direction + kA52 * k2.direction + kA53 * k3.direction +
                  kA54 * k4.direction);
    const FlowEval k5 = flow_eval(system, objective, y5, duration, params.gradient_floor);
    y6 = y + h * (kA61 * k1.direction + kA62 * k2.direction + kA63 * k3.direction +
                  kA64 * k4.direction + kA65 * k5.direction);
    const FlowEval k6 = flow_eval(system, objective, y6, duration, params.gradient_floor);
    y_next = y + h * (kB1 * k1.direction + kB3 * k3.direction + kB4 * k4.direction +
                      kB5 * k5.direction + kB6 * k6.direction);
    const FlowEval k7 = flow_eval(system, objective, y_next, duration, params.gradient_floor);
    report.gradient_evals += 6;

    err = h * (kE1 * k1.direction + kE3 * k3.direction + kE4 * k4.direction +
               kE5 * k5.direction + kE6 * k6.direction + kE7 * k7.direction);
    const Eigen::ArrayXXd scale =
        params.atol + params.rtol * y.abs().max(y_next.abs());
    const double err_norm = std::sqrt((err / scale).square().mean());

    if (err_norm <= 1.0) {
      s += h;
      y.swap(y_next);
      k1 = k7;
      ++report.steps;
      report.j_history.emplace_back(s, k7.j);
      if (k7.j >= j_stop) {
        report.converged = true;
        break;
      }
    }
    const double factor = (err_norm > 0.0)
                              ? std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0)
                              : 5.0;
    h = std::clamp(h * factor, kMinStep, kMaxStep);
    h = std::min(h, params.max_s - s + 1e-12);
    if (h < kMinStep) break;
  }

  report.s_reached = s;
  report.field = ControlField(y, duration);
  return report;
}

std::vector<double> pairwise_distances(const std::vector<ControlField>& pool) {
  if (pool.size() < 2) {
    throw std::invalid_argument("pairwise_distances: need at least two fields");
  }
  std::vector<double> out;
  out.reserve(pool.size() * (pool.size() - 1) / 2);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      out.push_back(l2_distance(pool[i], pool[j]));
    }
  }
  return out;
}

}  // namespace qcland
