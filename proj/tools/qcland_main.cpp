#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "qcland/analysis.hpp"
#include "qcland/harness.hpp"
#include "qcland/serialization.hpp"

namespace fs = std::filesystem;
using qcland::ExperimentConfig;

namespace {

// Campaign flags shared by every campaign subcommand. Values are applied to
// the config only when the user actually passed the flag, so --config files
// keep their settings unless overridden.
struct CampaignArgs {
  std::string config_path;
  std::string preset = "fourlevel";
  std::uint64_t preset_seed = 1;
  std::string landscape = "stl";
  int trials = 10;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string out;
  double eps = 1e-3, eps_st = 1e-3, eps_dm = 1e-3;
  double tau1 = 1e-4, tau2_rel = 1e-2, tau2_floor = 1e-3;
  double fluence = 1.0;
  bool log_fluence = false;
  bool no_save_fields = false;
  CLI::App* cmd = nullptr;

  void attach(CLI::App* sub) {
    cmd = sub;
    sub->add_option("--config", config_path, "JSON config file to start from");
    sub->add_option("--preset", preset, "model preset: fourlevel|fivelevel|two_spin");
    sub->add_option("--preset-seed", preset_seed, "seed for randomized preset ingredients");
    sub->add_option("--landscape", landscape, "objective: stl|ocl|utl");
    sub->add_option("--trials", trials, "number of trials");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--workers", workers, "worker threads (0: hardware)");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--eps", eps, "top manifold tolerance");
    sub->add_option("--eps-st", eps_st, "string tolerance");
    sub->add_option("--eps-dm", eps_dm, "level-set fall-off tolerance");
    sub->add_option("--tau1", tau1, "trapped threshold");
    sub->add_option("--tau2-rel", tau2_rel, "relative arrival threshold");
    sub->add_option("--tau2-floor", tau2_floor, "absolute arrival floor");
    sub->add_option("--fluence", fluence, "initial field fluence");
    sub->add_flag("--log-fluence", log_fluence, "draw log10 fluence from [-2, 2]");
    sub->add_flag("--no-save-fields", no_save_fields, "skip field CSV bundles");
  }

  ExperimentConfig build(qcland::CampaignKind kind) const {
    ExperimentConfig cfg;
    if (cmd->count("--config")) {
      cfg = ExperimentConfig::from_json(qcland::read_json_file(config_path));
    }
    cfg.campaign = kind;
    auto passed = [this](const std::string& name) { return cmd->count(name) > 0; };
    if (passed("--preset")) cfg.preset = preset;
    if (passed("--preset-seed")) cfg.preset_seed = preset_seed;
    if (passed("--landscape")) cfg.landscape = landscape;
    if (passed("--trials")) cfg.trials = trials;
    if (passed("--seed")) cfg.seed = seed;
    if (passed("--workers")) cfg.workers = workers;
    if (passed("--out")) cfg.out_dir = out;
    if (passed("--eps")) cfg.eps = eps;
    if (passed("--eps-st")) cfg.eps_st = eps_st;
    if (passed("--eps-dm")) cfg.eps_dm = eps_dm;
    if (passed("--tau1")) cfg.tau1 = tau1;
    if (passed("--tau2-rel")) cfg.tau2_rel = tau2_rel;
    if (passed("--tau2-floor")) cfg.tau2_floor = tau2_floor;
    if (passed("--fluence")) cfg.target_fluence = fluence;
    if (passed("--log-fluence")) cfg.log_fluence = log_fluence;
    if (passed("--no-save-fields")) cfg.save_fields = !no_save_fields;
    return cfg;
  }
};

int run_and_report(const ExperimentConfig& cfg) {
  const qcland::CampaignSummary summary = qcland::run_campaign(cfg);
  std::printf("campaign %s on %s/%s: %d trials, %d succeeded, %d failed (%.1fs)\n",
              qcland::to_string(cfg.campaign).c_str(), cfg.preset.c_str(),
              cfg.landscape.c_str(), summary.stats.count, summary.stats.succeeded,
              summary.stats.failed, summary.wall_seconds);
  if (summary.stats.ratio_avg) {
    std::printf("  R min/avg/max = %.4f / %.4f / %.4f\n", *summary.stats.ratio_min,
                *summary.stats.ratio_avg, *summary.stats.ratio_max);
  }
  if (summary.extra.contains("per_eps")) {
    for (const auto& row : summary.extra["per_eps"]) {
      std::printf("  eps_st %.1e: %d converged, avg R = %.4f\n",
                  row["eps_st"].get<double>(), row["converged"].get<int>(),
                  row["avg_ratio"].get<double>());
    }
  }
  if (!cfg.out_dir.empty()) {
    std::printf("  wrote %s\n", (cfg.out_dir / "summary.json").string().c_str());
  }
  return 0;
}

std::vector<qcland::ControlField> load_record_fields(const qcland::json& record,
                                                     const fs::path& fields_root) {
  const auto& detail = record.at("detail");
  const double duration = detail.at("duration").get<double>();
  std::vector<std::string> files;
  for (const char* key : {"image_files", "path_files"}) {
    if (detail.contains(key)) {
      files = detail.at(key).get<std::vector<std::string>>();
      break;
    }
  }
  if (files.empty() && detail.contains("field_file")) {
    files.push_back(detail.at("field_file").get<std::string>());
  }
  if (files.empty()) {
    throw std::runtime_error("record carries no field files; rerun without --no-save-fields");
  }
  std::vector<qcland::ControlField> fields;
  fields.reserve(files.size());
  for (const auto& f : files) fields.push_back(qcland::load_field_csv(fields_root / f, duration));
  return fields;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum control landscape top-manifold toolkit"};
  app.require_subcommand(1);

  struct Sub {
    qcland::CampaignKind kind;
    CampaignArgs args;
  };
  std::vector<Sub> subs;
  subs.reserve(7);

  auto add_campaign = [&](const std::string& name, qcland::CampaignKind kind,
                          const std::string& help) -> CLI::App* {
    CLI::App* sub = app.add_subcommand(name, help);
    subs.push_back(Sub{kind, {}});
    subs.back().args.attach(sub);
    return sub;
  };

  add_campaign("climb", qcland::CampaignKind::ClimbPool,
               "sample random fields and climb them to the top manifold");
  add_campaign("connect-string", qcland::CampaignKind::ConnectString,
               "connect random optimal pairs with the string method");
  add_campaign("connect-dmorph", qcland::CampaignKind::ConnectDmorph,
               "connect random optimal pairs with level-set homotopy");
  CLI::App* arc_cmd = add_campaign("arc-test", qcland::CampaignKind::ArcTest,
                                   "relax arc-initialized strings");
  CLI::App* walk_cmd = add_campaign("walk-far", qcland::CampaignKind::WalkFar,
                                    "far-reaching walks in the top manifold");
  CLI::App* explore_cmd = add_campaign("explore-random", qcland::CampaignKind::ExploreRandom,
                                       "stochastic exploration with random guiding functions");
  CLI::App* sweep_cmd = add_campaign("sweep-eps", qcland::CampaignKind::ToleranceSweep,
                                     "string runs over a range of tolerances on fixed pairs");

  double arc_ratio = 5.0;
  int arc_n_st0 = 32;
  arc_cmd->add_option("--target-r", arc_ratio, "initial arc ratio (> 1)");
  arc_cmd->add_option("--arc-images", arc_n_st0, "initial segment count of the arc");

  double fluence_cap = 1e3;
  int n_optima = 2;
  walk_cmd->add_option("--fluence-cap", fluence_cap, "terminate walks above this fluence");
  walk_cmd->add_option("--optima", n_optima, "number of distinct starting optima");

  double window = 1.0;
  int n_windows = 100;
  explore_cmd->add_option("--window", window, "guiding redraw interval in s");
  explore_cmd->add_option("--windows", n_windows, "number of windows");

  std::vector<double> sweep_eps;
  sweep_cmd->add_option("--eps-list", sweep_eps, "eps_st values to sweep");

  // analyze: R metrics and PCA coordinates from a stored trial record.
  CLI::App* analyze = app.add_subcommand("analyze", "R/PCA over a stored path record");
  std::string report_path, fields_root_str, analyze_out = ".";
  bool with_pca = false;
  analyze->add_option("--report", report_path, "records/trial_XXX.json")->required();
  analyze->add_option("--fields-root", fields_root_str,
                      "directory holding the field bundles (default: sibling fields/)");
  analyze->add_option("--out", analyze_out, "output directory");
  analyze->add_flag("--pca", with_pca, "also write 3D PCA coordinates");

  // preset: export the named preset as JSON.
  CLI::App* preset_cmd = app.add_subcommand("preset", "model presets");
  CLI::App* preset_export = preset_cmd->add_subcommand("export", "write a preset as JSON");
  std::string preset_name = "fourlevel", preset_out;
  std::uint64_t preset_variant = 1;
  preset_export->add_option("--name", preset_name, "fourlevel|fivelevel|two_spin");
  preset_export->add_option("--preset-seed", preset_variant, "seed for randomized ingredients");
  preset_export->add_option("--out", preset_out, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& sub : subs) {
      if (!sub.args.cmd->parsed()) continue;
      ExperimentConfig cfg = sub.args.build(sub.kind);
      if (sub.args.cmd == arc_cmd) {
        if (arc_cmd->count("--target-r")) cfg.arc_target_ratio = arc_ratio;
        if (arc_cmd->count("--arc-images")) cfg.arc_n_st0 = arc_n_st0;
      } else if (sub.args.cmd == walk_cmd) {
        if (walk_cmd->count("--fluence-cap")) cfg.fluence_cap = fluence_cap;
        if (walk_cmd->count("--optima")) cfg.n_optima = n_optima;
      } else if (sub.args.cmd == explore_cmd) {
        if (explore_cmd->count("--window")) cfg.window = window;
        if (explore_cmd->count("--windows")) cfg.n_windows = n_windows;
      } else if (sub.args.cmd == sweep_cmd) {
        if (sweep_cmd->count("--eps-list")) cfg.sweep_eps = sweep_eps;
      }
      return run_and_report(cfg);
    }

    if (analyze->parsed()) {
      const fs::path report(report_path);
      const fs::path fields_root = fields_root_str.empty()
                                       ? report.parent_path().parent_path() / "fields"
                                       : fs::path(fields_root_str);
      const qcland::json record = qcland::read_json_file(report);
      const auto fields = load_record_fields(record, fields_root);
      const qcland::PathMetrics metrics = qcland::ratio_R(fields);
      qcland::json out{{"path_length", metrics.path_length},
                       {"endpoint_distance", metrics.endpoint_distance},
                       {"ratio", metrics.ratio},
                       {"n_fields", fields.size()}};
      fs::create_directories(analyze_out);
      if (with_pca) {
        const qcland::PcaProjection pca = qcland::pca_project(fields, fields.back());
        out["pca_percent"] = pca.explained_percent;
        std::FILE* f = std::fopen((fs::path(analyze_out) / "pca_coords.csv").string().c_str(), "w");
        if (!f) throw std::runtime_error("cannot write pca_coords.csv");
        std::fprintf(f, "i,c1,c2,c3\n");
        for (Eigen::Index i = 0; i < pca.coordinates.rows(); ++i) {
          std::fprintf(f, "%lld,%.17g,%.17g,%.17g\n", static_cast<long long>(i),
                       pca.coordinates(i, 0), pca.coordinates(i, 1), pca.coordinates(i, 2));
        }
        std::fclose(f);
      }
      qcland::write_json_file(fs::path(analyze_out) / "metrics.json", out);
      std::cout << out.dump(2) << '\n';
      return 0;
    }

    if (preset_export->parsed()) {
      const qcland::json j = qcland::to_json(qcland::load_preset(preset_name, preset_variant));
      if (preset_out.empty()) {
        std::cout << j.dump(2) << '\n';
      } else {
        qcland::write_json_file(preset_out, j);
      }
      return 0;
    }

    std::cerr << "no subcommand executed\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
