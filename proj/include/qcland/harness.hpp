#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcland/climb.hpp"
#include "qcland/level_set.hpp"
#include "qcland/model_zoo.hpp"
#include "qcland/string_method.hpp"

namespace qcland {

enum class CampaignKind {
  ClimbPool,
  ConnectString,
  ConnectDmorph,
  ArcTest,
  WalkFar,
  ExploreRandom,
  ToleranceSweep,
};
CampaignKind campaign_kind_from_string(const std::string& name);
std::string to_string(CampaignKind kind);

/// Full description of one campaign. Everything that influences results is
/// in here (and hashed); trials derive their seeds from `seed` by index.
struct ExperimentConfig {
  CampaignKind campaign = CampaignKind::ClimbPool;
  std::string preset = "fourlevel";
  std::uint64_t preset_seed = 1;
  std::string landscape = "stl";
  std::optional<nlohmann::json> inline_setup;  // replaces preset when present
  int trials = 10;
  std::uint64_t seed = 1;
  int workers = 0;  // 0: hardware concurrency
  std::filesystem::path out_dir;
  bool save_fields = true;

  // Tolerances.
  double eps = 1e-3;
  double eps_st = 1e-3;
  double eps_dm = 1e-3;
  double tau1 = 1e-4;
  double tau2_rel = 1e-2;
  double tau2_floor = 1e-3;

  // Climbing.
  double climb_max_s = 1000.0;
  long climb_budget = 100000;
  double target_fluence = 1.0;
  bool log_fluence = false;
  double log_fluence_lo = -2.0;
  double log_fluence_hi = 2.0;

  // String method.
  int n_st0 = 20;
  double h_st = 0.05;
  int string_max_iters = 1000;
  int max_images = 256;

  // Level-set motion.
  double h_levelset = 1e-2;
  long levelset_budget = 100000;
  int record_stride = 10;
  double fluence_cap = 1e3;  // far walks
  int n_optima = 2;          // far walks: number of distinct starting optima
  double window = 1.0;       // stochastic exploration
  int n_windows = 100;

  // Arc-initialized strings.
  double arc_target_ratio = 5.0;
  int arc_n_st0 = 32;

  // Tolerance sweep (trials = number of fixed pairs).
  std::vector<double> sweep_eps = {1e-3, 1e-4};

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  std::uint64_t hash() const;
  void validate() const;
};

struct TrialRecord {
  int index = 0;
  std::uint64_t seed = 0;
  std::string outcome;
  bool success = false;
  std::optional<double> ratio;
  nlohmann::json detail;
};

struct SummaryStats {
  int count = 0;
  int succeeded = 0;
  int failed = 0;
  std::optional<double> ratio_min, ratio_avg, ratio_max;
  std::map<std::string, int> failure_reasons;
};

/// min/avg/max over the ratios of successful trials plus failure counts.
/// Throws on empty input.
SummaryStats summarize(const std::vector<TrialRecord>& records);

struct CampaignSummary {
  ExperimentConfig config;
  std::uint64_t config_hash = 0;
  std::vector<TrialRecord> records;
  SummaryStats stats;
  nlohmann::json extra;  // campaign-specific aggregates (e.g. per-eps averages)
  double wall_seconds = 0.0;
};

/// Executes the configured campaign. Trials run concurrently (up to
/// config.workers), are independently seeded, and a throwing trial is
/// recorded as failed without aborting the campaign. When out_dir is set the
/// summary, per-trial records and field CSVs are persisted there.
CampaignSummary run_campaign(const ExperimentConfig& config);

nlohmann::json campaign_summary_to_json(const CampaignSummary& summary);

/// Recomputes the stats block from the records embedded in a persisted
/// summary and compares. Returns false on any mismatch.
bool verify_summary_consistency(const nlohmann::json& summary_json);

/// System + objective + grid resolved from a preset name or an inline setup.
struct ResolvedSetup {
  QuantumSystem system;
  Objective objective;
  double duration;
  int grid_points;
  InitialFieldSpec field_spec;
};
ResolvedSetup resolve_setup(const ExperimentConfig& config);

/// Deterministic per-trial seed.
std::uint64_t trial_seed(const ExperimentConfig& config, int trial_index);

}  // namespace qcland
