#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace srt::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 2;
inline constexpr int kEmptyResult = 3;
inline constexpr int kNonConvergence = 4;

/// Everything a pipeline run can be told, from a JSON config file and/or
/// command-line flags (flags win). Paths are checked for existence when the
/// command that needs them starts.
struct RunConfig {
  std::optional<std::filesystem::path> tracks;
  std::optional<std::filesystem::path> tracks_meta;
  std::optional<std::filesystem::path> recording_meta;
  std::optional<std::filesystem::path> geometry;
  std::optional<std::filesystem::path> scenarios;
  std::optional<std::filesystem::path> model;
  std::filesystem::path out = "out";
  std::uint64_t seed = 0;

  std::string family = "loglogistic";
  std::string formula = "srt ~ v_m + lv_i + lv_m + dav + mtype + itype";
  std::string direction = "both";

  std::optional<std::string> arm;
  double approach_window_max = 60.0;
  double min_drop = 0.5;
  double vru_overlap_margin = 1.0;
  double turn_threshold = 45.0;

  std::string km_by = "itype";  // "itype" or "none"
  std::string profile;          // "v_m=1.3,itype=int_ped,..."
  double quantile = 0.5;
  double level = 0.95;
  std::string grid;             // "min:max:step" survival-curve grid

  static RunConfig from_json(const std::filesystem::path& path);
};

int cmd_extract(const RunConfig& cfg);
int cmd_describe(const RunConfig& cfg);
int cmd_fitdist(const RunConfig& cfg);
int cmd_km(const RunConfig& cfg);
int cmd_fit(const RunConfig& cfg);
int cmd_select(const RunConfig& cfg);
int cmd_predict(const RunConfig& cfg);
int cmd_report(const RunConfig& cfg);

/// Run a command with the shared exception-to-exit-code mapping; optimizer
/// failures leave their trace under cfg.out.
int run_command(const std::string& name, const RunConfig& cfg);

}  // namespace srt::cli
