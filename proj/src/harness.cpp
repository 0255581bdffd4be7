#include "qcland/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <thread>

#include "qcland/analysis.hpp"
#include "qcland/rng.hpp"
#include "qcland/serialization.hpp"

namespace qcland {

namespace fs = std::filesystem;

CampaignKind campaign_kind_from_string(const std::string& name) {
  if (name == "climb_pool") return CampaignKind::ClimbPool;
  if (name == "connect_string") return CampaignKind::ConnectString;
  if (name == "connect_dmorph") return CampaignKind::ConnectDmorph;
  if (name == "arc_test") return CampaignKind::ArcTest;
  if (name == "walk_far") return CampaignKind::WalkFar;
  if (name == "explore_random") return CampaignKind::ExploreRandom;
  if (name == "tolerance_sweep") return CampaignKind::ToleranceSweep;
  throw std::invalid_argument("unknown campaign kind: " + name);
}

std::string to_string(CampaignKind kind) {
  switch (kind) {
    case CampaignKind::ClimbPool: return "climb_pool";
    case CampaignKind::ConnectString: return "connect_string";
    case CampaignKind::ConnectDmorph: return "connect_dmorph";
    case CampaignKind::ArcTest: return "arc_test";
    case CampaignKind::WalkFar: return "walk_far";
    case CampaignKind::ExploreRandom: return "explore_random";
    case CampaignKind::ToleranceSweep: return "tolerance_sweep";
  }
  return "unknown";
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.campaign = campaign_kind_from_string(j.value("campaign", to_string(c.campaign)));
  c.preset = j.value("preset", c.preset);
  c.preset_seed = j.value("preset_seed", c.preset_seed);
  c.landscape = j.value("landscape", c.landscape);
  if (j.contains("inline_setup")) c.inline_setup = j.at("inline_setup");
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  c.workers = j.value("workers", c.workers);
  c.out_dir = j.value("out", std::string{});
  c.save_fields = j.value("save_fields", c.save_fields);
  c.eps = j.value("eps", c.eps);
  c.eps_st = j.value("eps_st", c.eps_st);
  c.eps_dm = j.value("eps_dm", c.eps_dm);
  c.tau1 = j.value("tau1", c.tau1);
  c.tau2_rel = j.value("tau2_rel", c.tau2_rel);
  c.tau2_floor = j.value("tau2_floor", c.tau2_floor);
  c.climb_max_s = j.value("climb_max_s", c.climb_max_s);
  c.climb_budget = j.value("climb_budget", c.climb_budget);
  c.target_fluence = j.value("target_fluence", c.target_fluence);
  c.log_fluence = j.value("log_fluence", c.log_fluence);
  c.log_fluence_lo = j.value("log_fluence_lo", c.log_fluence_lo);
  c.log_fluence_hi = j.value("log_fluence_hi", c.log_fluence_hi);
  c.n_st0 = j.value("n_st0", c.n_st0);
  c.h_st = j.value("h_st", c.h_st);
  c.string_max_iters = j.value("string_max_iters", c.string_max_iters);
  c.max_images = j.value("max_images", c.max_images);
  c.h_levelset = j.value("h_levelset", c.h_levelset);
  c.levelset_budget = j.value("levelset_budget", c.levelset_budget);
  c.record_stride = j.value("record_stride", c.record_stride);
  c.fluence_cap = j.value("fluence_cap", c.fluence_cap);
  c.n_optima = j.value("n_optima", c.n_optima);
  c.window = j.value("window", c.window);
  c.n_windows = j.value("n_windows", c.n_windows);
  c.arc_target_ratio = j.value("arc_target_ratio", c.arc_target_ratio);
  c.arc_n_st0 = j.value("arc_n_st0", c.arc_n_st0);
  if (j.contains("sweep_eps")) c.sweep_eps = j.at("sweep_eps").get<std::vector<double>>();
  return c;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j{{"campaign", qcland::to_string(campaign)},
                   {"preset", preset},
                   {"preset_seed", preset_seed},
                   {"landscape", landscape},
                   {"trials", trials},
                   {"seed", seed},
                   {"workers", workers},
                   {"out", out_dir.string()},
                   {"save_fields", save_fields},
                   {"eps", eps},
                   {"eps_st", eps_st},
                   {"eps_dm", eps_dm},
                   {"tau1", tau1},
                   {"tau2_rel", tau2_rel},
                   {"tau2_floor", tau2_floor},
                   {"climb_max_s", climb_max_s},
                   {"climb_budget", climb_budget},
                   {"target_fluence", target_fluence},
                   {"log_fluence", log_fluence},
                   {"log_fluence_lo", log_fluence_lo},
                   {"log_fluence_hi", log_fluence_hi},
                   {"n_st0", n_st0},
                   {"h_st", h_st},
                   {"string_max_iters", string_max_iters},
                   {"max_images", max_images},
                   {"h_levelset", h_levelset},
                   {"levelset_budget", levelset_budget},
                   {"record_stride", record_stride},
                   {"fluence_cap", fluence_cap},
                   {"n_optima", n_optima},
                   {"window", window},
                   {"n_windows", n_windows},
                   {"arc_target_ratio", arc_target_ratio},
                   {"arc_n_st0", arc_n_st0},
                   {"sweep_eps", sweep_eps}};
  if (inline_setup) j["inline_setup"] = *inline_setup;
  return j;
}

std::uint64_t ExperimentConfig::hash() const {
  const std::string dump = to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  for (const double tol : {eps, eps_st, eps_dm, tau1, tau2_rel, tau2_floor}) {
    if (!(tol > 0.0)) throw std::invalid_argument("config: tolerances must be positive");
  }
  if (campaign == CampaignKind::ToleranceSweep) {
    if (sweep_eps.empty()) throw std::invalid_argument("config: sweep needs eps values");
    for (const double e : sweep_eps) {
      if (!(e > 0.0)) throw std::invalid_argument("config: sweep eps must be positive");
    }
  }
  if (campaign == CampaignKind::WalkFar && n_optima < 1) {
    throw std::invalid_argument("config: walk_far needs n_optima >= 1");
  }
}

ResolvedSetup resolve_setup(const ExperimentConfig& config) {
  if (config.inline_setup) {
    const nlohmann::json& j = *config.inline_setup;
    QuantumSystem system = quantum_system_from_json(j.at("system"));
    Objective objective = j.contains("objectives")
                              ? objective_from_json(j.at("objectives").at(config.landscape))
                              : objective_from_json(j.at("objective"));
    InitialFieldSpec spec;
    if (j.contains("field_spec")) {
      const auto& fj = j.at("field_spec");
      spec.n_components = fj.value("n_components", spec.n_components);
      spec.freq_lo = fj.value("freq_lo", spec.freq_lo);
      spec.freq_hi = fj.value("freq_hi", spec.freq_hi);
    }
    return ResolvedSetup{std::move(system), std::move(objective), j.at("duration").get<double>(),
                         j.at("grid_points").get<int>(), spec};
  }
  Preset preset = load_preset(config.preset, config.preset_seed);
  Objective objective = preset.objective_by_name(config.landscape);
  return ResolvedSetup{std::move(preset.system), std::move(objective), preset.duration,
                       preset.grid_points, preset.field_spec};
}

std::uint64_t trial_seed(const ExperimentConfig& config, int trial_index) {
  return derive_seed(config.seed, static_cast<std::uint64_t>(trial_index));
}

namespace {

void parallel_for(int n, int workers, const std::function<void(int)>& body) {
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

ClimbParams climb_params(const ExperimentConfig& cfg, double epsilon) {
  ClimbParams p;
  p.epsilon = epsilon;
  p.max_s = cfg.climb_max_s;
  p.max_gradient_evals = cfg.climb_budget;
  return p;
}

LevelSetParams level_set_params(const ExperimentConfig& cfg) {
  LevelSetParams p;
  p.epsilon = cfg.eps;
  p.epsilon_dm = cfg.eps_dm;
  p.tau1 = cfg.tau1;
  p.tau2_rel = cfg.tau2_rel;
  p.tau2_floor = cfg.tau2_floor;
  p.step_size = cfg.h_levelset;
  p.max_propagations = cfg.levelset_budget;
  p.record_stride = cfg.record_stride;
  p.recovery = climb_params(cfg, cfg.eps);
  return p;
}

StringParams string_params(const ExperimentConfig& cfg, double eps_st) {
  StringParams p;
  p.epsilon_st = eps_st;
  p.ascent_step = cfg.h_st;
  p.max_iterations = cfg.string_max_iters;
  p.max_images = cfg.max_images;
  return p;
}

ControlField sample_trial_field(const ResolvedSetup& setup, const ExperimentConfig& cfg,
                                std::uint64_t seed) {
  InitialFieldSpec spec = setup.field_spec;
  spec.rng_seed = seed;
  spec.target_fluence = cfg.target_fluence;
  if (cfg.log_fluence) {
    spec.log10_fluence_range = std::make_pair(cfg.log_fluence_lo, cfg.log_fluence_hi);
  }
  return sample_initial_field(spec, setup.duration, setup.grid_points,
                              setup.system.n_controls());
}

ClimbReport climb_optimum(const ResolvedSetup& setup, const ExperimentConfig& cfg,
                          std::uint64_t seed, double epsilon) {
  const ControlField start = sample_trial_field(setup, cfg, seed);
  return climb(setup.system, setup.objective, start, climb_params(cfg, epsilon));
}

struct TrialIo {
  fs::path fields_dir;  // empty: no persistence

  std::string save_field(const ControlField& field, const std::string& name) const {
    if (fields_dir.empty()) return {};
    save_field_csv(fields_dir / name, field);
    return (fields_dir.filename() / name).string();
  }

  std::vector<std::string> save_path(const std::vector<ControlField>& path,
                                     const std::string& stem) const {
    std::vector<std::string> files;
    if (fields_dir.empty()) return files;
    files.reserve(path.size());
    char name[64];
    for (std::size_t i = 0; i < path.size(); ++i) {
      std::snprintf(name, sizeof(name), "%s_%04zu.csv", stem.c_str(), i);
      files.push_back(save_field(path[i], name));
    }
    return files;
  }
};

TrialRecord climb_pool_trial(const ExperimentConfig& cfg, const ResolvedSetup& setup, int index,
                             const TrialIo& io) {
  TrialRecord rec;
  rec.index = index;
  rec.seed = trial_seed(cfg, index);
  const ClimbReport rep = climb_optimum(setup, cfg, derive_seed(rec.seed, 1), cfg.eps);
  rec.success = rep.converged;
  rec.outcome = rep.converged ? "converged" : "failed";
  rec.detail["climb"] = climb_report_to_json(rep);
  rec.detail["duration"] = setup.duration;
  const std::string file = io.save_field(rep.field, "field.csv");
  if (!file.empty()) rec.detail["field_file"] = file;
  return rec;
}

struct EndpointPair {
  ClimbReport a;
  ClimbReport b;
  bool ok() const { return a.converged && b.converged; }
};

EndpointPair climb_pair(const ExperimentConfig& cfg, const ResolvedSetup& setup,
                        std::uint64_t seed, double epsilon) {
  return EndpointPair{climb_optimum(setup, cfg, derive_seed(seed, 1), epsilon),
                      climb_optimum(setup, cfg, derive_seed(seed, 2), epsilon)};
}

void attach_string_detail(TrialRecord& rec, const StringState& state, double duration,
                          const TrialIo& io) {
  rec.detail["string"] = string_state_to_json(state);
  rec.detail["duration"] = duration;
  const auto files = io.save_path(state.images, "image");
  if (!files.empty()) rec.detail["image_files"] = files;
}

TrialRecord connect_string_trial(const ExperimentConfig& cfg, const ResolvedSetup& setup,
                                 int index, const TrialIo& io) {
  TrialRecord rec;
  rec.index = index;
  rec.seed = trial_seed(cfg, index);
  const double endpoint_eps = std::min(cfg.eps, cfg.eps_st);
  const EndpointPair pair = climb_pair(cfg, setup, rec.seed, endpoint_eps);
  if (!pair.ok()) {
    rec.outcome = "endpoint_climb_failed";
    return rec;
  }
  StringState state = init_straight(pair.a.field, pair.b.field, cfg.n_st0);
  state = relax(setup.system, setup.objective, std::move(state), string_params(cfg, cfg.eps_st));
  rec.success = state.status == StringStatus::Converged;
  rec.outcome = to_string(state.status);
  rec.ratio = ratio_R(state.images).ratio;
  attach_string_detail(rec, state, setup.duration, io);
  return rec;
}

TrialRecord connect_dmorph_trial(const ExperimentConfig& cfg, const ResolvedSetup& setup,
                                 int index, const TrialIo& io) {
  TrialRecord rec;
  rec.index = index;
  rec.seed = trial_seed(cfg, index);
  const EndpointPair pair = climb_pair(cfg, setup, rec.seed, cfg.eps);
  if (!pair.ok()) {
    rec.outcome = "endpoint_climb_failed";
    return rec;
  }
  const ConnectReport rep = connect_dmorph(setup.system, setup.objective, pair.a.field,
                                           pair.b.field, level_set_params(cfg));
  rec.success = rep.outcome == ConnectOutcome::ReachedTarget;
  rec.outcome = to_string(rep.outcome);
  rec.ratio = rep.ratio;
  rec.detail["report"] = connect_report_to_json(rep);
  rec.detail["duration"] = setup.duration;
  const auto files = io.save_path(rep.path, "path");
  if (!files.empty()) rec.detail["path_files"] = files;
  return rec;
}

TrialRecord arc_test_trial(const ExperimentConfig& cfg, const ResolvedSetup& setup, int index,
                           const TrialIo& io) {
  TrialRecord rec;
  rec.index = index;
  rec.seed = trial_seed(cfg, index);
  const double endpoint_eps = std::min(cfg.eps, cfg.eps_st);
  const EndpointPair pair = climb_pair(cfg, setup, rec.seed, endpoint_eps);
  if (!pair.ok()) {
    rec.outcome = "endpoint_climb_failed";
    return rec;
  }
  StringState state = init_arc(pair.a.field, pair.b.field, cfg.arc_target_ratio,
                               derive_seed(rec.seed, 3), cfg.arc_n_st0);
  const std::vector<ControlField> arc_images = state.images;
  rec.detail["initial_ratio"] = ratio_R(arc_images).ratio;
  state = relax(setup.system, setup.objective, std::move(state), string_params(cfg, cfg.eps_st));
  rec.success = state.status == StringStatus::Converged;
  rec.outcome = to_string(state.status);
  rec.ratio = ratio_R(state.images).ratio;
  if (rec.success) {
    rec.detail["mean_arc_distance"] = path_distance(arc_images, state.images).mean;
  }
  attach_string_detail(rec, state, setup.duration, io);
  if (!io.fields_dir.empty()) {
    rec.detail["arc_files"] = io.save_path(arc_images, "arc");
  }
  return rec;
}

TrialRecord walk_far_trial(const ExperimentConfig& cfg, const ResolvedSetup& setup, int index,
                           const std::vector<std::optional<ControlField>>& optima,
                           const TrialIo& io) {
  TrialRecord rec;
  rec.index = index;
  rec.seed = trial_seed(cfg, index);
  const int opt_index = index % cfg.n_optima;
  const auto& start = optima[static_cast<std::size_t>(opt_index)];
  if (!start) {
    rec.outcome = "start_climb_failed";
    return rec;
  }
  FarWalkParams params;
  params.base = level_set_params(cfg);
  params.fluence_cap = cfg.fluence_cap;
  params.direction_seed = derive_seed(rec.seed, 7);
  const ConnectReport rep = walk_far(setup.system, setup.objective, *start, params);
  rec.success = rep.outcome == ConnectOutcome::ReachedTarget;
  rec.outcome = to_string(rep.outcome);
  rec.ratio = rep.ratio;
  rec.detail["report"] = connect_report_to_json(rep);
  rec.detail["duration"] = setup.duration;
  rec.detail["optimum_index"] = opt_index;
  const auto files = io.save_path(rep.path, "path");
  if (!files.empty()) rec.detail["path_files"] = files;
  return rec;
}

TrialRecord explore_trial(const ExperimentConfig& cfg, const ResolvedSetup& setup, int index,
                          const TrialIo& io) {
  TrialRecord rec;
  rec.index = index;
  rec.seed = trial_seed(cfg, index);
  const ClimbReport start = climb_optimum(setup, cfg, derive_seed(rec.seed, 1), cfg.eps);
  if (!start.converged) {
    rec.outcome = "start_climb_failed";
    return rec;
  }
  ExploreParams params;
  params.base = level_set_params(cfg);
  params.window = cfg.window;
  params.n_windows = cfg.n_windows;
  params.seed = derive_seed(rec.seed, 9);
  const ConnectReport rep = explore_stochastic(setup.system, setup.objective, start.field, params);
  bool any_trapped = false;
  double worst_ratio = 0.0;
  for (const auto& w : rep.windows) {
    any_trapped = any_trapped || w.trapped;
    worst_ratio = std::max(worst_ratio, w.ratio);
  }
  rec.success = rep.outcome == ConnectOutcome::ReachedTarget && !any_trapped;
  rec.outcome = any_trapped ? "trapped_window" : to_string(rep.outcome);
  rec.ratio = worst_ratio;
  rec.detail["report"] = connect_report_to_json(rep);
  rec.detail["duration"] = setup.duration;
  const auto files = io.save_path(rep.path, "path");
  if (!files.empty()) rec.detail["path_files"] = files;
  return rec;
}

TrialRecord guarded(int index, std::uint64_t seed, const std::function<TrialRecord()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    TrialRecord rec;
    rec.index = index;
    rec.seed = seed;
    rec.outcome = "error";
    rec.detail["reason"] = e.what();
    return rec;
  }
}

fs::path trial_fields_dir(const ExperimentConfig& cfg, int index) {
  if (cfg.out_dir.empty() || !cfg.save_fields) return {};
  char name[32];
  std::snprintf(name, sizeof(name), "trial_%03d", index);
  return cfg.out_dir / "fields" / name;
}

void persist_summary(const CampaignSummary& summary) {
  const fs::path& out = summary.config.out_dir;
  fs::create_directories(out / "records");
  for (const auto& rec : summary.records) {
    nlohmann::json j{{"index", rec.index}, {"seed", rec.seed},       {"outcome", rec.outcome},
                     {"success", rec.success}, {"detail", rec.detail}};
    if (rec.ratio) j["ratio"] = *rec.ratio;
    char name[32];
    std::snprintf(name, sizeof(name), "trial_%03d.json", rec.index);
    write_json_file(out / "records" / name, j);
  }
  write_json_file(out / "summary.json", campaign_summary_to_json(summary));
}

}  // namespace

SummaryStats summarize(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  SummaryStats stats;
  stats.count = static_cast<int>(records.size());
  double sum = 0.0;
  int with_ratio = 0;
  for (const auto& rec : records) {
    if (rec.success) {
      ++stats.succeeded;
      if (rec.ratio) {
        ++with_ratio;
        sum += *rec.ratio;
        stats.ratio_min = stats.ratio_min ? std::min(*stats.ratio_min, *rec.ratio) : *rec.ratio;
        stats.ratio_max = stats.ratio_max ? std::max(*stats.ratio_max, *rec.ratio) : *rec.ratio;
      }
    } else {
      ++stats.failed;
      ++stats.failure_reasons[rec.outcome.empty() ? "unknown" : rec.outcome];
    }
  }
  if (with_ratio > 0) stats.ratio_avg = sum / with_ratio;
  return stats;
}

CampaignSummary run_campaign(const ExperimentConfig& config) {
  config.validate();
  const ResolvedSetup setup = resolve_setup(config);
  const auto t0 = std::chrono::steady_clock::now();

  if (!config.out_dir.empty()) {
    fs::create_directories(config.out_dir);
    if (config.save_fields) fs::create_directories(config.out_dir / "fields");
  }

  CampaignSummary summary;
  summary.config = config;
  summary.config_hash = config.hash();

  if (config.campaign == CampaignKind::ToleranceSweep) {
    const int pairs = config.trials;
    const double endpoint_eps =
        std::min(config.eps, *std::min_element(config.sweep_eps.begin(), config.sweep_eps.end()));
    std::vector<std::optional<EndpointPair>> endpoint_pairs(static_cast<std::size_t>(pairs));
    parallel_for(pairs, config.workers, [&](int p) {
      try {
        endpoint_pairs[static_cast<std::size_t>(p)] =
            climb_pair(config, setup, trial_seed(config, p), endpoint_eps);
      } catch (const std::exception&) {
        endpoint_pairs[static_cast<std::size_t>(p)] = std::nullopt;
      }
    });

    const int n_eps = static_cast<int>(config.sweep_eps.size());
    summary.records.resize(static_cast<std::size_t>(pairs) * n_eps);
    parallel_for(pairs * n_eps, config.workers, [&](int idx) {
      const int e = idx / pairs;
      const int p = idx % pairs;
      const double eps_st = config.sweep_eps[static_cast<std::size_t>(e)];
      summary.records[static_cast<std::size_t>(idx)] =
          guarded(idx, trial_seed(config, p), [&]() {
            TrialRecord rec;
            rec.index = idx;
            rec.seed = trial_seed(config, p);
            rec.detail["eps_st"] = eps_st;
            rec.detail["pair"] = p;
            const auto& pair = endpoint_pairs[static_cast<std::size_t>(p)];
            if (!pair || !pair->ok()) {
              rec.outcome = "endpoint_climb_failed";
              return rec;
            }
            StringState state = init_straight(pair->a.field, pair->b.field, config.n_st0);
            state = relax(setup.system, setup.objective, std::move(state),
                          string_params(config, eps_st));
            rec.success = state.status == StringStatus::Converged;
            rec.outcome = to_string(state.status);
            rec.ratio = ratio_R(state.images).ratio;
            const TrialIo io{trial_fields_dir(config, idx)};
            if (!io.fields_dir.empty()) fs::create_directories(io.fields_dir);
            attach_string_detail(rec, state, setup.duration, io);
            return rec;
          });
    });

    nlohmann::json per_eps = nlohmann::json::array();
    for (int e = 0; e < n_eps; ++e) {
      double sum = 0.0;
      int n_ok = 0;
      for (int p = 0; p < pairs; ++p) {
        const auto& rec = summary.records[static_cast<std::size_t>(e * pairs + p)];
        if (rec.success && rec.ratio) {
          sum += *rec.ratio;
          ++n_ok;
        }
      }
      per_eps.push_back({{"eps_st", config.sweep_eps[static_cast<std::size_t>(e)]},
                         {"converged", n_ok},
                         {"avg_ratio", n_ok ? sum / n_ok : 0.0}});
    }
    summary.extra["per_eps"] = std::move(per_eps);
  } else {
    std::vector<std::optional<ControlField>> optima;
    if (config.campaign == CampaignKind::WalkFar) {
      optima.resize(static_cast<std::size_t>(config.n_optima));
      parallel_for(config.n_optima, config.workers, [&](int k) {
        try {
          const ClimbReport rep = climb_optimum(
              setup, config, derive_seed(config.seed, 0xFA0 + static_cast<std::uint64_t>(k)),
              config.eps);
          if (rep.converged) optima[static_cast<std::size_t>(k)] = rep.field;
        } catch (const std::exception&) {
        }
      });
    }

    summary.records.resize(static_cast<std::size_t>(config.trials));
    parallel_for(config.trials, config.workers, [&](int i) {
      const TrialIo io{trial_fields_dir(config, i)};
      if (!io.fields_dir.empty()) fs::create_directories(io.fields_dir);
      summary.records[static_cast<std::size_t>(i)] =
          guarded(i, trial_seed(config, i), [&]() -> TrialRecord {
            switch (config.campaign) {
              case CampaignKind::ClimbPool: return climb_pool_trial(config, setup, i, io);
              case CampaignKind::ConnectString: return connect_string_trial(config, setup, i, io);
              case CampaignKind::ConnectDmorph: return connect_dmorph_trial(config, setup, i, io);
              case CampaignKind::ArcTest: return arc_test_trial(config, setup, i, io);
              case CampaignKind::WalkFar: return walk_far_trial(config, setup, i, optima, io);
              case CampaignKind::ExploreRandom: return explore_trial(config, setup, i, io);
              default: throw std::logic_error("unhandled campaign");
            }
          });
    });
  }

  summary.stats = summarize(summary.records);
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!config.out_dir.empty()) persist_summary(summary);
  return summary;
}

nlohmann::json campaign_summary_to_json(const CampaignSummary& summary) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& rec : summary.records) {
    nlohmann::json j{{"index", rec.index},
                     {"seed", rec.seed},
                     {"outcome", rec.outcome},
                     {"success", rec.success}};
    if (rec.ratio) j["ratio"] = *rec.ratio;
    records.push_back(std::move(j));
  }
  nlohmann::json stats{{"count", summary.stats.count},
                       {"succeeded", summary.stats.succeeded},
                       {"failed", summary.stats.failed},
                       {"failure_reasons", summary.stats.failure_reasons}};
  if (summary.stats.ratio_min) stats["ratio_min"] = *summary.stats.ratio_min;
  if (summary.stats.ratio_avg) stats["ratio_avg"] = *summary.stats.ratio_avg;
  if (summary.stats.ratio_max) stats["ratio_max"] = *summary.stats.ratio_max;
  nlohmann::json out{{"config", summary.config.to_json()},
                     {"config_hash", summary.config_hash},
                     {"stats", std::move(stats)},
                     {"records", std::move(records)},
                     {"wall_seconds", summary.wall_seconds}};
  if (!summary.extra.is_null()) out["extra"] = summary.extra;
  return out;
}

bool verify_summary_consistency(const nlohmann::json& summary_json) {
  try {
    const auto& records = summary_json.at("records");
    const auto& stats = summary_json.at("stats");
    int succeeded = 0, failed = 0;
    double sum = 0.0;
    int with_ratio = 0;
    std::optional<double> lo, hi;
    for (const auto& rec : records) {
      if (rec.at("success").get<bool>()) {
        ++succeeded;
        if (rec.contains("ratio")) {
          const double r = rec.at("ratio").get<double>();
          ++with_ratio;
          sum += r;
          lo = lo ? std::min(*lo, r) : r;
          hi = hi ? std::max(*hi, r) : r;
        }
      } else {
        ++failed;
      }
    }
    if (stats.at("count").get<int>() != static_cast<int>(records.size())) return false;
    if (stats.at("succeeded").get<int>() != succeeded) return false;
    if (stats.at("failed").get<int>() != failed) return false;
    if (with_ratio > 0) {
      if (std::abs(stats.at("ratio_avg").get<double>() - sum / with_ratio) > 1e-9) return false;
      if (stats.at("ratio_min").get<double>() != *lo) return false;
      if (stats.at("ratio_max").get<double>() != *hi) return false;
    }
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace qcland
