#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srt/ingest.hpp"

namespace srt::scenario {

enum class ManeuverType { straight, turning_left, turning_right };
enum class InteractionType { no_interaction, int_ped, int_cyc };

std::string to_string(ManeuverType m);
std::string to_string(InteractionType i);
ManeuverType parse_maneuver(const std::string& s);
InteractionType parse_interaction(const std::string& s);

/// One yielding event: the analysis row. Invariants are enforced by
/// checked(); srt > 0, v_i >= v_m >= 0, lv_i > lv_m >= 0, dav >= 0.
struct ScenarioRecord {
  int track_id;
  double srt;
  double v_i;
  double lv_i;
  double v_m;
  double lv_m;
  double dav;
  ManeuverType mtype;
  InteractionType itype;

  static ScenarioRecord checked(int track_id, double srt, double v_i, double lv_i,
                                double v_m, double lv_m, double dav, ManeuverType mtype,
                                InteractionType itype);
};

struct ExtractionConfig {
  double approach_window_max = 60.0;  // m
  double min_drop = 0.5;              // m/s
  double vru_overlap_margin = 1.0;    // s
  double turn_threshold = 45.0;       // degrees, < 90
  std::optional<std::string> arm_filter;

  void validate() const;
};

struct BrakingEvent {
  std::size_t i_idx;
  std::size_t m_idx;
  double v_i;
  double lv_i;
  double v_m;
  double lv_m;
  double srt;
};

/// Locate the speed-reduction maneuver: i_idx is the speed argmax over
/// frames with distance in (0, approach_window_max], m_idx the argmin over
/// the frames after it up to the entry-line crossing (ties: first frame).
BrakingEvent detect_braking(std::span<const double> speed, std::span<const double> dist,
                            double frame_rate, const ExtractionConfig& cfg);

/// Average deceleration (v_i^2 - v_m^2) / (2 (lv_i - lv_m)).
double compute_dav(double v_i, double v_m, double lv_i, double lv_m);

/// Net signed heading change across the conflict zone, wrapped to
/// (-180, 180]; counterclockwise-positive, so +turn_threshold and above is
/// a left turn.
ManeuverType classify_maneuver(const ingest::TrackSeries& track,
                               const geom::SiteGeometry& geometry,
                               const ExtractionConfig& cfg);

/// VRU occupancy of the crossing polygon during
/// [t(i_idx), t(m_idx) + vru_overlap_margin]; bicycles take precedence
/// over pedestrians.
InteractionType classify_interaction(const ingest::TrackSeries& car,
                                     const std::vector<ingest::Track>& vrus,
                                     const BrakingEvent& braking, double frame_rate,
                                     const geom::SiteGeometry& geometry,
                                     const ExtractionConfig& cfg);

struct Exclusion {
  int track_id;
  std::string reason;
};

struct ExtractionResult {
  std::vector<ScenarioRecord> records;  // ordered by track_id
  std::vector<Exclusion> exclusions;    // per candidate driver track
};

/// Run the full rule-based extraction over every car/truck_bus track.
ExtractionResult extract_scenarios(const ingest::Recording& recording,
                                   const geom::SiteGeometry& geometry,
                                   const ExtractionConfig& cfg);

struct GroupMeans {
  std::size_t n;
  double v_i;
  double lv_i;
  double v_m;
  double lv_m;
  double dav;
  double srt;
};

/// Arithmetic means per interaction type; empty groups omitted.
std::map<InteractionType, GroupMeans> describe(const std::vector<ScenarioRecord>& records);

/// Scenario table CSV (floats with 6 decimal places).
void write_scenario_csv(const std::filesystem::path& path,
                        const std::vector<ScenarioRecord>& records);
std::vector<ScenarioRecord> read_scenario_csv(const std::filesystem::path& path);

}  // namespace srt::scenario
