#include <clocale>
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "srt/cli.hpp"

using srt::cli::RunConfig;

int main(int argc, char** argv) {
  std::setlocale(LC_NUMERIC, "C");  // deterministic number formatting

  CLI::App app{"Speed-reduction-time survival analysis pipeline"};
  app.require_subcommand(1);

  // flag storage; only values the user actually set are copied into the config
  std::string config_path;
  std::string tracks, tracks_meta, recording_meta, geometry, scenarios, model;
  std::string out, family, formula, direction, arm, km_by, profile, grid;
  std::uint64_t seed = 0;
  double window = 0, min_drop = 0, overlap = 0, turn_thr = 0, quantile = 0, level = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; flags override it");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "seed recorded in outputs");
    return sub;
  };

  CLI::App* extract = add_common(app.add_subcommand(
      "extract", "detect yielding scenarios from a trajectory recording"));
  extract->add_option("--tracks", tracks, "tracks CSV");
  extract->add_option("--tracks-meta", tracks_meta, "tracksMeta CSV");
  extract->add_option("--recording-meta", recording_meta, "recordingMeta CSV");
  extract->add_option("--geometry", geometry, "site geometry JSON");
  extract->add_option("--arm", arm, "restrict to one approach arm");
  extract->add_option("--window", window, "approach window length (m)");
  extract->add_option("--min-drop", min_drop, "minimum speed drop (m/s)");
  extract->add_option("--overlap-margin", overlap, "VRU occupancy margin (s)");
  extract->add_option("--turn-threshold", turn_thr,
                      "turn classification threshold (deg)");

  CLI::App* describe = add_common(
      app.add_subcommand("describe", "per-scenario means and SRT densities"));
  describe->add_option("--scenarios", scenarios, "scenario table CSV");

  CLI::App* fitdist = add_common(app.add_subcommand(
      "fitdist", "fit the five lifetime distributions to SRT, rank by AIC"));
  fitdist->add_option("--scenarios", scenarios, "scenario table CSV");

  CLI::App* km = add_common(
      app.add_subcommand("km", "Kaplan-Meier curves and AFT diagnostics"));
  km->add_option("--scenarios", scenarios, "scenario table CSV");
  km->add_option("--by", km_by, "grouping: itype or none");

  CLI::App* fit = add_common(app.add_subcommand("fit", "fit an AFT regression model"));
  fit->add_option("--scenarios", scenarios, "scenario table CSV");
  fit->add_option("--formula", formula, "model formula, e.g. 'srt ~ v_m + mtype'");
  fit->add_option("--family", family, "exponential|weibull|lognormal|loglogistic");

  CLI::App* select = add_common(
      app.add_subcommand("select", "stepwise AIC model selection"));
  select->add_option("--scenarios", scenarios, "scenario table CSV");
  select->add_option("--formula", formula, "candidate terms");
  select->add_option("--family", family, "AFT family");
  select->add_option("--direction", direction, "forward|backward|both");

  CLI::App* predict = add_common(
      app.add_subcommand("predict", "predict SRT from a saved model"));
  predict->add_option("--model", model, "model JSON");
  predict->add_option("--at", profile, "profile, e.g. 'v_m=1.3,itype=int_ped'");
  predict->add_option("--q", quantile, "quantile to predict");
  predict->add_option("--level", level, "confidence level for the median");
  predict->add_option("--grid", grid, "survival-curve grid min:max:step");

  add_common(app.add_subcommand("report", "index the produced artifacts"));

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  auto set = [&](const char* name) {
    const CLI::Option* o = sub->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = RunConfig::from_json(config_path);

    if (set("--tracks")) cfg.tracks = tracks;
    if (set("--tracks-meta")) cfg.tracks_meta = tracks_meta;
    if (set("--recording-meta")) cfg.recording_meta = recording_meta;
    if (set("--geometry")) cfg.geometry = geometry;
    if (set("--scenarios")) cfg.scenarios = scenarios;
    if (set("--model")) cfg.model = model;
    if (set("--out")) cfg.out = out;
    if (set("--seed")) cfg.seed = seed;
    if (set("--arm")) cfg.arm = arm;
    if (set("--window")) cfg.approach_window_max = window;
    if (set("--min-drop")) cfg.min_drop = min_drop;
    if (set("--overlap-margin")) cfg.vru_overlap_margin = overlap;
    if (set("--turn-threshold")) cfg.turn_threshold = turn_thr;
    if (set("--by")) cfg.km_by = km_by;
    if (set("--formula")) cfg.formula = formula;
    if (set("--family")) cfg.family = family;
    if (set("--direction")) cfg.direction = direction;
    if (set("--at")) cfg.profile = profile;
    if (set("--q")) cfg.quantile = quantile;
    if (set("--level")) cfg.level = level;
    if (set("--grid")) cfg.grid = grid;

    return srt::cli::run_command(sub->get_name(), cfg);
  } catch (const std::exception& e) {
    std::cerr << sub->get_name() << ": " << e.what() << "\n";
    return srt::cli::kInputError;
  }
}
