#include "qcland/level_set.hpp"

#include <cmath>
#include <stdexcept>

#include "qcland/rng.hpp"

namespace qcland {

Eigen::ArrayXXd project_out_gradient(const Eigen::ArrayXXd& grad, const Eigen::ArrayXXd& f,
                                     double dt) {
  if (grad.rows() != f.rows() || grad.cols() != f.cols()) {
    throw std::invalid_argument("project_out_gradient: shape mismatch");
  }
  const double gg = l2_inner(grad, grad, dt);
  if (!(gg > 0.0)) {
    throw std::domain_error("project_out_gradient: degenerate zero gradient");
  }
  const double gf = l2_inner(grad, f, dt);
  return f - (gf / gg) * grad;
}

std::string to_string(ConnectOutcome outcome) {
  switch (outcome) {
    case ConnectOutcome::ReachedTarget: return "reached_target";
    case ConnectOutcome::Trapped: return "trapped";
    case ConnectOutcome::BudgetExhausted: return "budget_exhausted";
  }
  return "unknown";
}

namespace {

enum class GuideMode { Toward, Away, RandomWindows };

Eigen::ArrayXXd random_unit_field(int n_controls, int length, double dt, std::mt19937_64& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::ArrayXXd f(n_controls, length);
  for (int c = 0; c < n_controls; ++c) {
    for (int k = 0; k < length; ++k) f(c, k) = normal(engine);
  }
  const double n = l2_norm(f, dt);
  if (!(n > 0.0)) throw std::runtime_error("degenerate random direction");
  return f / n;
}

struct Engine {
  const QuantumSystem& system;
  const Objective& objective;
  const LevelSetParams& p;
  double duration;
  double dt;
  GuideMode mode;
  Eigen::ArrayXXd anchor;  // target samples (Toward) or origin samples (Away)
  Eigen::ArrayXXd fixed_dir;
  long propagations = 0;

  Evaluation eval_at(const Eigen::ArrayXXd& y) {
    ++propagations;
    return evaluate(system, objective, ControlField(y, duration));
  }

  double value_at(const Eigen::ArrayXXd& y) {
    ++propagations;
    return evaluate_value(system, objective, ControlField(y, duration));
  }

  Eigen::ArrayXXd guide(const Eigen::ArrayXXd& y) const {
    switch (mode) {
      case GuideMode::Toward: {
        Eigen::ArrayXXd delta = anchor - y;
        const double n = l2_norm(delta, dt);
        if (n < 1e-15) return Eigen::ArrayXXd::Zero(y.rows(), y.cols());
        return delta / n;
      }
      case GuideMode::Away: {
        Eigen::ArrayXXd delta = y - anchor;
        const double n = l2_norm(delta, dt);
        if (n < 1e-9) return fixed_dir;
        return delta / n;
      }
      case GuideMode::RandomWindows: return fixed_dir;
    }
    throw std::logic_error("unreachable");
  }

  // [1 - P] applied to the guiding direction at y; grad_values is the
  // discrete gradient there (the projector is scale-invariant in it).
  Eigen::ArrayXXd velocity(const Eigen::ArrayXXd& y, const Eigen::ArrayXXd& grad_values) const {
    Eigen::ArrayXXd f = guide(y);
    const double gg = l2_inner(grad_values, grad_values, dt);
    const double functional_norm = std::sqrt(gg) / dt;
    if (functional_norm < p.gradient_floor) return f;  // whole space admissible
    const double gf = l2_inner(grad_values, f, dt);
    return f - (gf / gg) * grad_values;
  }

  Eigen::ArrayXXd velocity_fresh(const Eigen::ArrayXXd& y) {
    const Evaluation ev = eval_at(y);
    return velocity(y, ev.gradient.values);
  }
};

struct RunConfig {
  double tau2 = 0.0;         // Toward arrival radius
  double fluence_cap = 0.0;  // Away termination
  double window = 0.0;       // RandomWindows
  int n_windows = 0;
  std::uint64_t seed = 0;
};

ConnectReport run_level_set(Engine& eng, const ControlField& start, const RunConfig& cfg) {
  const LevelSetParams& p = eng.p;
  const double dt = eng.dt;
  ConnectReport rep;

  Eigen::ArrayXXd y = start.samples();
  Evaluation ev = eng.eval_at(y);
  double j_cur = ev.value;
  if (j_cur < 1.0 - p.epsilon) {
    throw std::invalid_argument("level set motion: start field is not in the top manifold");
  }
  const double j_ref = j_cur;  // fall-off reference J(0)

  auto metric = [&](const Eigen::ArrayXXd& e) {
    const Eigen::ArrayXXd delta = (eng.mode == GuideMode::Toward) ? (eng.anchor - e).eval()
                                                                  : (e - eng.anchor).eval();
    const double n = l2_norm(delta, dt);
    return n * n;
  };

  rep.path.push_back(start);
  rep.history.push_back(StepRecord{0.0, metric(y), j_cur, false});
  rep.j_min_recorded = j_cur;

  double s = 0.0, d_p = 0.0;
  long accepted = 0;
  int window_idx = 0;
  double window_path = 0.0;
  Eigen::ArrayXXd window_start = y;
  auto close_window = [&](bool trapped, const Eigen::ArrayXXd& end) {
    const double denom = l2_norm(Eigen::ArrayXXd(end - window_start), dt);
    const double ratio = window_path / std::max(denom, 1e-300);
    rep.windows.push_back(WindowStats{window_idx, window_path, ratio, trapped});
  };

  if (eng.mode == GuideMode::RandomWindows) {
    auto engine = make_engine(derive_seed(cfg.seed, static_cast<std::uint64_t>(window_idx)));
    eng.fixed_dir = random_unit_field(start.n_controls(), start.length(), dt, engine);
  }

  bool done = false;
  while (!done) {
    // Termination on the current accepted state.
    if (eng.mode == GuideMode::Toward) {
      const double dist = l2_norm(Eigen::ArrayXXd(eng.anchor - y), dt);
      if (dist < cfg.tau2) {
        rep.outcome = ConnectOutcome::ReachedTarget;
        if (dist > 1e-15) {
          // Certify the straight final hop before appending the exact target.
          bool hop_ok = true;
          for (int m = 1; m <= 10 && hop_ok; ++m) {
            const double alpha = static_cast<double>(m) / 10.0;
            const Eigen::ArrayXXd probe = (1.0 - alpha) * y + alpha * eng.anchor;
            hop_ok = eng.value_at(probe) >= 1.0 - p.epsilon;
          }
          if (hop_ok) {
            d_p += dist;
            y = eng.anchor;
            rep.path.push_back(ControlField(y, eng.duration));
          } else {
            rep.near_target = true;
          }
        }
        break;
      }
    } else if (eng.mode == GuideMode::Away) {
      if (y.square().sum() * dt > cfg.fluence_cap) {
        rep.outcome = ConnectOutcome::ReachedTarget;
        break;
      }
    } else {
      if (window_idx >= cfg.n_windows) {
        rep.outcome = ConnectOutcome::ReachedTarget;
        break;
      }
    }

    if (eng.propagations + 4 > p.max_propagations) {
      rep.outcome = ConnectOutcome::BudgetExhausted;
      break;
    }

    // Trapped check on the projected direction at the current state.
    Eigen::ArrayXXd v1 = eng.velocity(y, ev.gradient.values);
    const double v1_norm = l2_norm(v1, dt);
    if (v1_norm < p.tau1) {
      rep.outcome = ConnectOutcome::Trapped;
      if (eng.mode == GuideMode::RandomWindows) close_window(true, y);
      break;
    }

    double h = p.step_size;
    if (eng.mode == GuideMode::RandomWindows) {
      const double boundary = (window_idx + 1) * cfg.window;
      h = std::min(h, boundary - s);
    }

    // One RK4 step with rejection + halving on excessive J loss.
    Eigen::ArrayXXd y_new;
    Evaluation ev_new;
    double j_new = 0.0;
    for (int halvings = 0;; ++halvings) {
      const Eigen::ArrayXXd k2 = eng.velocity_fresh(y + (0.5 * h) * v1);
      const Eigen::ArrayXXd k3 = eng.velocity_fresh(y + (0.5 * h) * k2);
      const Eigen::ArrayXXd k4 = eng.velocity_fresh(y + h * k3);
      y_new = y + (h / 6.0) * (v1 + 2.0 * k2 + 2.0 * k3 + k4);
      ev_new = eng.eval_at(y_new);
      j_new = ev_new.value;
      if (j_new >= j_cur - p.epsilon_dm / 10.0 || halvings >= 12) break;
      h *= 0.5;
      if (eng.propagations + 4 > p.max_propagations) break;
    }

    bool post_recovery = false;
    if (j_new < j_ref - p.epsilon_dm) {
      // Fell off the level set; push back up before recording anything.
      ClimbParams recovery = p.recovery;
      recovery.epsilon = p.epsilon;
      const ClimbReport rec =
          climb(eng.system, eng.objective, ControlField(y_new, eng.duration), recovery);
      eng.propagations += rec.gradient_evals + 1;
      y_new = rec.field.samples();
      ev_new = eng.eval_at(y_new);
      j_new = ev_new.value;
      ++rep.recoveries;
      post_recovery = true;
      if (j_new < 1.0 - p.epsilon) {
        // Recovery failed within its budget; report as trapped.
        rep.outcome = ConnectOutcome::Trapped;
        if (eng.mode == GuideMode::RandomWindows) close_window(true, y);
        break;
      }
    }

    const double step_len = l2_norm(Eigen::ArrayXXd(y_new - y), dt);
    s += h;
    d_p += step_len;
    window_path += step_len;
    y.swap(y_new);
    ev = std::move(ev_new);
    j_cur = j_new;
    ++accepted;

    rep.history.push_back(StepRecord{s, metric(y), j_cur, post_recovery});
    rep.j_min_recorded = std::min(rep.j_min_recorded, j_cur);
    if (p.record_stride > 0 && accepted % p.record_stride == 0) {
      rep.path.push_back(ControlField(y, eng.duration));
    }

    if (eng.mode == GuideMode::RandomWindows) {
      const double boundary = (window_idx + 1) * cfg.window;
      if (s >= boundary - 1e-12) {
        close_window(false, y);
        ++window_idx;
        window_path = 0.0;
        window_start = y;
        if (window_idx < cfg.n_windows) {
          auto engine = make_engine(derive_seed(cfg.seed, static_cast<std::uint64_t>(window_idx)));
          eng.fixed_dir = random_unit_field(start.n_controls(), start.length(), dt, engine);
        }
      }
    }
  }

  const ControlField last(y, eng.duration);
  if (rep.path.empty() || l2_distance(rep.path.back(), last) > 0.0) {
    rep.path.push_back(last);
  }
  rep.path_length = d_p;
  rep.endpoint_distance = l2_distance(rep.path.front(), rep.path.back());
  rep.ratio = (rep.endpoint_distance > 1e-15) ? d_p / rep.endpoint_distance : 1.0;
  rep.propagations = eng.propagations;
  rep.s_end = s;
  rep.final_fluence = fluence(last);
  return rep;
}

}  // namespace

ConnectReport connect_dmorph(const QuantumSystem& system, const Objective& objective,
                             const ControlField& start, const ControlField& target,
                             const LevelSetParams& params) {
  require_same_grid(start, target);
  Engine eng{system, objective, params, start.duration(), start.dt(), GuideMode::Toward,
             target.samples(), {}};
  if (eng.value_at(target.samples()) < 1.0 - params.epsilon) {
    throw std::invalid_argument("connect_dmorph: target field is not in the top manifold");
  }
  RunConfig cfg;
  cfg.tau2 = std::max(params.tau2_rel * l2_distance(start, target), params.tau2_floor);
  return run_level_set(eng, start, cfg);
}

ConnectReport walk_far(const QuantumSystem& system, const Objective& objective,
                       const ControlField& start, const FarWalkParams& params) {
  Engine eng{system, objective, params.base, start.duration(), start.dt(), GuideMode::Away,
             start.samples(), {}};
  auto engine = make_engine(params.direction_seed);
  eng.fixed_dir = random_unit_field(start.n_controls(), start.length(), start.dt(), engine);
  RunConfig cfg;
  cfg.fluence_cap = params.fluence_cap;
  return run_level_set(eng, start, cfg);
}

ConnectReport explore_stochastic(const QuantumSystem& system, const Objective& objective,
                                 const ControlField& start, const ExploreParams& params) {
  if (!(params.window > 0.0) || params.n_windows < 1) {
    throw std::invalid_argument("explore_stochastic: need positive window and count");
  }
  Engine eng{system, objective, params.base, start.duration(), start.dt(),
             GuideMode::RandomWindows, start.samples(), {}};
  RunConfig cfg;
  cfg.window = params.window;
  cfg.n_windows = params.n_windows;
  cfg.seed = params.seed;
  return run_level_set(eng, start, cfg);
}

}  // namespace qcland
