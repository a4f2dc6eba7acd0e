#include "srt/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "srt/aft.hpp"
#include "srt/csv.hpp"
#include "srt/errors.hpp"
#include "srt/kaplan_meier.hpp"
#include "srt/kde.hpp"
#include "srt/model_io.hpp"
#include "srt/scenario.hpp"

namespace srt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require_file(const std::optional<fs::path>& path, const std::string& what) {
  if (!path) throw Error("missing required input: " + what);
  if (!fs::exists(*path)) throw Error(what + " file not found: " + path->string());
}

std::vector<scenario::ScenarioRecord> load_scenarios(const RunConfig& cfg) {
  require_file(cfg.scenarios, "scenario table");
  auto records = scenario::read_scenario_csv(*cfg.scenarios);
  if (records.empty())
    throw EmptyResultError("scenario table " + cfg.scenarios->string() + " has no rows");
  return records;
}

std::vector<surv::SurvivalSample> srt_samples(
    const std::vector<scenario::ScenarioRecord>& records) {
  std::vector<surv::SurvivalSample> samples;
  samples.reserve(records.size());
  for (const auto& r : records) samples.push_back({r.srt, true});
  return samples;
}

scenario::ExtractionConfig extraction_config(const RunConfig& cfg) {
  scenario::ExtractionConfig ex;
  ex.approach_window_max = cfg.approach_window_max;
  ex.min_drop = cfg.min_drop;
  ex.vru_overlap_margin = cfg.vru_overlap_margin;
  ex.turn_threshold = cfg.turn_threshold;
  ex.arm_filter = cfg.arm;
  ex.validate();
  return ex;
}

aft::PredictionProfile parse_profile(const std::string& text,
                                     const aft::DesignSpec& spec) {
  aft::PredictionProfile profile;
  std::istringstream in(text);
  std::string pair;
  while (std::getline(in, pair, ',')) {
    auto b = pair.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    auto e = pair.find_last_not_of(" \t");
    pair = pair.substr(b, e - b + 1);
    auto eq = pair.find('=');
    if (eq == std::string::npos)
      throw Error("profile entry '" + pair + "' is not key=value");
    std::string key = pair.substr(0, eq);
    std::string value = pair.substr(eq + 1);
    bool is_factor = std::any_of(spec.categorical_columns.begin(),
                                 spec.categorical_columns.end(),
                                 [&](const auto& c) { return c.name == key; });
    if (is_factor)
      profile.categorical[key] = value;
    else
      profile.numeric[key] = csv::to_double(value, "profile value for " + key);
  }
  return profile;
}

std::vector<double> parse_grid(const std::string& text) {
  double lo = 0, hi = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':')
    throw Error("grid must be min:max:step, got '" + text + "'");
  if (!(lo > 0.0) || !(step > 0.0) || hi < lo)
    throw Error("grid bounds must satisfy 0 < min <= max, step > 0");
  std::vector<double> times;
  for (double t = lo; t <= hi + 1e-12 * step; t += step) times.push_back(t);
  return times;
}

void write_summary_csv(const fs::path& path, const aft::AftFit& fit) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : aft::wald_summary(fit))
    rows.push_back({row.name, csv::fmt(row.coef), csv::fmt(row.std_error),
                    csv::fmt(row.z), csv::fmt(row.p)});
  csv::write_table(path, {"name", "coef", "std_error", "z", "p"}, rows);
}

aft::AftFit fit_with_lr(const RunConfig& cfg,
                        const std::vector<scenario::ScenarioRecord>& records,
                        const aft::DesignSpec& spec, aft::LrTestResult* lr_out) {
  surv::DistFamily family = surv::parse_family(cfg.family);
  aft::DesignMatrix design = aft::build_design_matrix(records, spec);
  aft::AftFit fit = aft::fit_aft(design, family);
  if (lr_out && !spec.slope_names().empty()) {
    aft::DesignMatrix null_design =
        aft::build_design_matrix(records, aft::DesignSpec{});
    aft::AftFit null_fit = aft::fit_aft(null_design, family);
    *lr_out = aft::lr_test(fit, null_fit);
  }
  return fit;
}

void save_model_with_lr(const fs::path& path, const aft::AftFit& fit,
                        std::uint64_t seed, const aft::LrTestResult* lr) {
  aft::save_model_json(fit, path, seed);
  if (!lr) return;
  std::ifstream in(path);
  json j;
  in >> j;
  in.close();
  j["lr_vs_null"] = {{"chisq", lr->chisq}, {"df", lr->df}, {"p", lr->p}};
  csv::write_atomic(path, j.dump(2) + "\n");
}

}  // namespace

RunConfig RunConfig::from_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }

  RunConfig cfg;
  auto path_of = [&](const char* key) -> std::optional<fs::path> {
    if (!j.contains(key)) return std::nullopt;
    fs::path p = j.at(key).get<std::string>();
    if (!fs::exists(p))
      throw Error(std::string(key) + " file not found: " + p.string());
    return p;
  };
  try {
    static const std::vector<std::string> known = {
        "tracks", "tracks_meta", "recording_meta", "geometry", "scenarios",
        "model", "out", "seed", "family", "formula", "direction", "arm",
        "approach_window_max", "min_drop", "vru_overlap_margin",
        "turn_threshold", "km_by", "profile", "quantile", "level", "grid"};
    for (const auto& [key, value] : j.items())
      if (std::find(known.begin(), known.end(), key) == known.end())
        throw SchemaError(path.string() + ": unknown config key '" + key + "'");

    cfg.tracks = path_of("tracks");
    cfg.tracks_meta = path_of("tracks_meta");
    cfg.recording_meta = path_of("recording_meta");
    cfg.geometry = path_of("geometry");
    cfg.scenarios = path_of("scenarios");
    cfg.model = path_of("model");
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("family")) cfg.family = j.at("family").get<std::string>();
    if (j.contains("formula")) cfg.formula = j.at("formula").get<std::string>();
    if (j.contains("direction")) cfg.direction = j.at("direction").get<std::string>();
    if (j.contains("arm")) cfg.arm = j.at("arm").get<std::string>();
    if (j.contains("approach_window_max"))
      cfg.approach_window_max = j.at("approach_window_max").get<double>();
    if (j.contains("min_drop")) cfg.min_drop = j.at("min_drop").get<double>();
    if (j.contains("vru_overlap_margin"))
      cfg.vru_overlap_margin = j.at("vru_overlap_margin").get<double>();
    if (j.contains("turn_threshold"))
      cfg.turn_threshold = j.at("turn_threshold").get<double>();
    if (j.contains("km_by")) cfg.km_by = j.at("km_by").get<std::string>();
    if (j.contains("profile")) cfg.profile = j.at("profile").get<std::string>();
    if (j.contains("quantile")) cfg.quantile = j.at("quantile").get<double>();
    if (j.contains("level")) cfg.level = j.at("level").get<double>();
    if (j.contains("grid")) cfg.grid = j.at("grid").get<std::string>();
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  return cfg;
}

int cmd_extract(const RunConfig& cfg) {
  require_file(cfg.tracks, "tracks");
  require_file(cfg.tracks_meta, "tracks meta");
  require_file(cfg.recording_meta, "recording meta");
  require_file(cfg.geometry, "geometry");

  ingest::Recording recording =
      ingest::parse_recording(*cfg.tracks, *cfg.tracks_meta, *cfg.recording_meta);
  geom::SiteGeometry geometry = geom::load_site_geometry(*cfg.geometry);
  scenario::ExtractionResult result =
      scenario::extract_scenarios(recording, geometry, extraction_config(cfg));

  scenario::write_scenario_csv(cfg.out / "scenarios.csv", result.records);
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& ex : result.exclusions)
      rows.push_back({std::to_string(ex.track_id), ex.reason});
    csv::write_table(cfg.out / "exclusions.csv", {"track_id", "reason"}, rows);
  }
  std::cerr << "extract: " << result.records.size() << " scenarios, "
            << result.exclusions.size() << " exclusions\n";
  if (result.records.empty())
    throw EmptyResultError("no scenario passed extraction");
  return kOk;
}

int cmd_describe(const RunConfig& cfg) {
  auto records = load_scenarios(cfg);
  auto groups = scenario::describe(records);

  std::vector<std::vector<std::string>> rows;
  std::map<scenario::InteractionType, std::vector<double>> srt_by_group;
  for (const auto& [itype, g] : groups)
    rows.push_back({scenario::to_string(itype), std::to_string(g.n),
                    csv::fmt(g.v_i), csv::fmt(g.lv_i), csv::fmt(g.v_m),
                    csv::fmt(g.lv_m), csv::fmt(g.dav), csv::fmt(g.srt)});
  csv::write_table(cfg.out / "describe.csv",
                   {"itype", "n", "v_i", "lv_i", "v_m", "lv_m", "dav", "srt"}, rows);

  for (const auto& r : records) srt_by_group[r.itype].push_back(r.srt);
  std::vector<std::vector<std::string>> density_rows;
  for (const auto& [itype, srts] : srt_by_group) {
    if (srts.size() < 2) continue;  // KDE needs spread
    for (const auto& pt : surv::kde_density(srts))
      density_rows.push_back(
          {scenario::to_string(itype), csv::fmt(pt.t), csv::fmt(pt.density)});
  }
  csv::write_table(cfg.out / "densities.csv", {"group", "t", "density"}, density_rows);
  return kOk;
}

int cmd_fitdist(const RunConfig& cfg) {
  auto records = load_scenarios(cfg);
  auto samples = srt_samples(records);

  std::vector<surv::FittedDistribution> fits;
  for (auto family :
       {surv::DistFamily::exponential, surv::DistFamily::weibull,
        surv::DistFamily::lognormal, surv::DistFamily::gamma,
        surv::DistFamily::loglogistic}) {
    try {
      fits.push_back(surv::fit_univariate(samples, family));
    } catch (const std::exception& e) {
      std::cerr << "fitdist: " << surv::family_name(family) << " failed: " << e.what()
                << "\n";
    }
  }
  if (fits.empty())
    throw NonConvergenceError(0, 0.0, "no distribution family could be fitted");
  std::sort(fits.begin(), fits.end(),
            [](const auto& a, const auto& b) { return a.aic < b.aic; });

  std::vector<std::vector<std::string>> rows;
  for (const auto& f : fits) {
    auto names = surv::param_names(f.family);
    std::vector<std::string> row = {surv::family_name(f.family)};
    for (std::size_t i = 0; i < 2; ++i) {
      row.push_back(i < names.size() ? names[i] : "");
      row.push_back(i < f.params.size() ? csv::fmt(f.params[i]) : "");
    }
    row.push_back(csv::fmt(f.log_likelihood));
    row.push_back(csv::fmt(f.aic));
    row.push_back(csv::fmt(f.bic));
    rows.push_back(row);
  }
  csv::write_table(cfg.out / "fitdist.csv",
                   {"family", "param1_name", "param1", "param2_name", "param2",
                    "logL", "aic", "bic"},
                   rows);
  return kOk;
}

int cmd_km(const RunConfig& cfg) {
  auto records = load_scenarios(cfg);

  std::map<std::string, std::vector<surv::SurvivalSample>> groups;
  if (cfg.km_by == "none") {
    groups["all"] = srt_samples(records);
  } else if (cfg.km_by == "itype") {
    for (const auto& r : records)
      groups[scenario::to_string(r.itype)].push_back({r.srt, true});
  } else {
    throw Error("km_by must be 'itype' or 'none', got '" + cfg.km_by + "'");
  }

  std::vector<std::vector<std::string>> diag_rows;
  for (const auto& [name, samples] : groups) {
    surv::KmCurve curve = surv::kaplan_meier(samples);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < curve.event_times.size(); ++i)
      rows.push_back({csv::fmt(curve.event_times[i]), csv::fmt(curve.survival[i]),
                      std::to_string(curve.at_risk[i]), std::to_string(curve.events[i]),
                      csv::fmt(curve.greenwood_var[i])});
    csv::write_table(cfg.out / ("km_" + name + ".csv"),
                     {"time", "survival", "at_risk", "events", "greenwood_var"}, rows);

    for (auto family : {surv::DistFamily::loglogistic, surv::DistFamily::lognormal}) {
      try {
        for (const auto& [lt, val] : surv::aft_diagnostic_points(curve, family))
          diag_rows.push_back(
              {name, surv::family_name(family), csv::fmt(lt), csv::fmt(val)});
      } catch (const TooFewPointsError&) {
        std::cerr << "km: group " << name << " too small for "
                  << surv::family_name(family) << " diagnostics\n";
      }
    }
  }
  csv::write_table(cfg.out / "diagnostics.csv",
                   {"group", "family", "log_time", "transformed"}, diag_rows);
  return kOk;
}

int cmd_fit(const RunConfig& cfg) {
  auto records = load_scenarios(cfg);
  aft::DesignSpec spec = aft::DesignSpec::from_formula(cfg.formula);
  aft::LrTestResult lr{};
  aft::AftFit fit = fit_with_lr(cfg, records, spec, &lr);
  save_model_with_lr(cfg.out / "model.json", fit, cfg.seed,
                     spec.slope_names().empty() ? nullptr : &lr);
  write_summary_csv(cfg.out / "summary.csv", fit);
  std::cerr << "fit: logL " << fit.log_likelihood << ", AIC " << fit.aic << ", "
            << fit.iterations << " iterations\n";
  return kOk;
}

int cmd_select(const RunConfig& cfg) {
  auto records = load_scenarios(cfg);
  aft::DesignSpec candidates = aft::DesignSpec::from_formula(cfg.formula);
  aft::StepwiseResult result =
      aft::stepwise_select(records, candidates, surv::parse_family(cfg.family),
                           aft::parse_direction(cfg.direction));

  aft::save_model_json(result.best, cfg.out / "model.json", cfg.seed);
  write_summary_csv(cfg.out / "summary.csv", result.best);

  json trace = json::array();
  for (const auto& step : result.trace) {
    json considered = json::array();
    for (const auto& c : step.considered)
      considered.push_back({{"action", c.action},
                            {"term", c.term},
                            {"aic", std::isnan(c.aic) ? json() : json(c.aic)},
                            {"error", c.error}});
    trace.push_back({{"action", step.action},
                     {"term", step.term},
                     {"aic", step.aic},
                     {"considered", considered}});
  }
  csv::write_atomic(cfg.out / "selection_trace.json", trace.dump(2) + "\n");
  return kOk;
}

int cmd_predict(const RunConfig& cfg) {
  require_file(cfg.model, "model");
  aft::AftFit fit = aft::load_model_json(*cfg.model);
  aft::PredictionProfile profile = parse_profile(cfg.profile, fit.spec);

  double estimate = aft::predict_quantile(fit, profile, cfg.quantile);
  double median = aft::predict_quantile(fit, profile, 0.5);
  double mean = aft::predict_mean(fit, profile);
  auto [lo, hi] = aft::predict_interval(fit, profile, cfg.level);

  csv::write_table(cfg.out / "prediction.csv",
                   {"q", "estimate", "median", "mean", "median_lo", "median_hi",
                    "level"},
                   {{csv::fmt(cfg.quantile), csv::fmt(estimate), csv::fmt(median),
                     csv::fmt(mean), csv::fmt(lo), csv::fmt(hi), csv::fmt(cfg.level)}});

  if (!cfg.grid.empty()) {
    std::vector<double> times = parse_grid(cfg.grid);
    std::vector<double> surv_values = aft::predict_survival_curve(fit, profile, times);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < times.size(); ++i)
      rows.push_back({csv::fmt(times[i]), csv::fmt(surv_values[i])});
    csv::write_table(cfg.out / "survival_curve.csv", {"t", "survival"}, rows);
  }
  return kOk;
}

int cmd_report(const RunConfig& cfg) {
  json artifacts = json::array();
  if (fs::exists(cfg.out)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(cfg.out))
      if (entry.is_regular_file() && entry.path().filename() != "report.json")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files)
      artifacts.push_back({{"file", f.filename().string()},
                           {"bytes", fs::file_size(f)}});
  }
  json j = {{"seed", cfg.seed}, {"artifacts", artifacts}};
  csv::write_atomic(cfg.out / "report.json", j.dump(2) + "\n");
  return kOk;
}

int run_command(const std::string& name, const RunConfig& cfg) {
  try {
    if (name == "extract") return cmd_extract(cfg);
    if (name == "describe") return cmd_describe(cfg);
    if (name == "fitdist") return cmd_fitdist(cfg);
    if (name == "km") return cmd_km(cfg);
    if (name == "fit") return cmd_fit(cfg);
    if (name == "select") return cmd_select(cfg);
    if (name == "predict") return cmd_predict(cfg);
    if (name == "report") return cmd_report(cfg);
    std::cerr << "unknown command '" << name << "'\n";
    return kInputError;
  } catch (const EmptyResultError& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return kEmptyResult;
  } catch (const NonConvergenceError& e) {
    fs::path trace_path = cfg.out / "optimizer_trace.txt";
    try {
      csv::write_atomic(trace_path, e.trace);
      std::cerr << name << ": " << e.what() << " (trace: " << trace_path.string()
                << ")\n";
    } catch (...) {
      std::cerr << name << ": " << e.what() << "\n";
    }
    return kNonConvergence;
  } catch (const SingularHessianError& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return kNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace srt::cli
