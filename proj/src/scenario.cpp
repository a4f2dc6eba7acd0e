#include "srt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "srt/csv.hpp"
#include "srt/errors.hpp"

namespace srt::scenario {

std::string to_string(ManeuverType m) {
  switch (m) {
    case ManeuverType::straight: return "straight";
    case ManeuverType::turning_left: return "turning_left";
    case ManeuverType::turning_right: return "turning_right";
  }
  return "?";
}

std::string to_string(InteractionType i) {
  switch (i) {
    case InteractionType::no_interaction: return "no_interaction";
    case InteractionType::int_ped: return "int_ped";
    case InteractionType::int_cyc: return "int_cyc";
  }
  return "?";
}

ManeuverType parse_maneuver(const std::string& s) {
  if (s == "straight") return ManeuverType::straight;
  if (s == "turning_left") return ManeuverType::turning_left;
  if (s == "turning_right") return ManeuverType::turning_right;
  throw ParseError("unknown maneuver type '" + s + "'");
}

InteractionType parse_interaction(const std::string& s) {
  if (s == "no_interaction") return InteractionType::no_interaction;
  if (s == "int_ped") return InteractionType::int_ped;
  if (s == "int_cyc") return InteractionType::int_cyc;
  throw ParseError("unknown interaction type '" + s + "'");
}

ScenarioRecord ScenarioRecord::checked(int track_id, double srt, double v_i,
                                       double lv_i, double v_m, double lv_m,
                                       double dav, ManeuverType mtype,
                                       InteractionType itype) {
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("scenario record for track " +
                                std::to_string(track_id) + ": " + what);
  };
  if (!(srt > 0.0)) fail("srt must be positive");
  if (!(v_i >= v_m)) fail("v_i must be >= v_m");
  if (!(v_m >= 0.0)) fail("v_m must be nonnegative");
  if (!(lv_i > lv_m)) fail("lv_i must exceed lv_m");
  if (!(lv_m >= 0.0)) fail("lv_m must be nonnegative");
  if (!(dav >= 0.0)) fail("dav must be nonnegative");
  return {track_id, srt, v_i, lv_i, v_m, lv_m, dav, mtype, itype};
}

void ExtractionConfig::validate() const {
  if (!(approach_window_max > 0.0))
    throw std::invalid_argument("approach_window_max must be positive");
  if (!(min_drop > 0.0)) throw std::invalid_argument("min_drop must be positive");
  if (!(vru_overlap_margin > 0.0))
    throw std::invalid_argument("vru_overlap_margin must be positive");
  if (!(turn_threshold > 0.0 && turn_threshold < 90.0))
    throw std::invalid_argument("turn_threshold must lie in (0, 90)");
}

BrakingEvent detect_braking(std::span<const double> speed, std::span<const double> dist,
                            double frame_rate, const ExtractionConfig& cfg) {
  cfg.validate();
  if (speed.size() != dist.size())
    throw std::invalid_argument("detect_braking: speed and dist lengths differ");
  if (!(frame_rate > 0.0))
    throw std::invalid_argument("detect_braking: frame_rate must be positive");

  const std::size_t n = speed.size();
  std::size_t i_idx = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (dist[k] > 0.0 && dist[k] <= cfg.approach_window_max &&
        (i_idx == n || speed[k] > speed[i_idx]))
      i_idx = k;
  }
  if (i_idx == n)
    throw EmptyWindowError("no frame with distance in (0, " +
                           std::to_string(cfg.approach_window_max) + "]");

  // frames up to and including the entry-line crossing
  std::size_t entry_idx = n;
  for (std::size_t k = 0; k < n; ++k)
    if (dist[k] >= 0.0) entry_idx = k;

  std::size_t m_idx = n;
  for (std::size_t k = i_idx + 1; k <= entry_idx && k < n; ++k)
    if (m_idx == n || speed[k] < speed[m_idx]) m_idx = k;
  if (m_idx == n)
    throw NoDecelerationError("no frames after the speed maximum before the crossing");

  double v_i = speed[i_idx];
  double v_m = speed[m_idx];
  if (v_i - v_m < cfg.min_drop)
    throw NoDecelerationError("speed drop " + std::to_string(v_i - v_m) +
                              " m/s below min_drop");
  return {i_idx, m_idx, v_i, dist[i_idx], v_m, dist[m_idx],
          static_cast<double>(m_idx - i_idx) / frame_rate};
}

double compute_dav(double v_i, double v_m, double lv_i, double lv_m) {
  if (lv_i == lv_m)
    throw DegenerateDistanceError("dav undefined: lv_i equals lv_m");
  return (v_i * v_i - v_m * v_m) / (2.0 * (lv_i - lv_m));
}

ManeuverType classify_maneuver(const ingest::TrackSeries& track,
                               const geom::SiteGeometry& geometry,
                               const ExtractionConfig& cfg) {
  cfg.validate();
  std::size_t entry = track.size(), exit = track.size();
  for (std::size_t k = 0; k < track.size(); ++k) {
    if (geom::point_in_polygon({track.x[k], track.y[k]}, geometry.conflict_zone)) {
      if (entry == track.size()) entry = k;
      exit = k;
    }
  }
  if (entry == track.size()) throw NoConflictZoneTransitError(track.track_id);

  double delta = geom::signed_angle_diff_deg(track.heading[entry], track.heading[exit]);
  if (delta > cfg.turn_threshold) return ManeuverType::turning_left;
  if (delta < -cfg.turn_threshold) return ManeuverType::turning_right;
  return ManeuverType::straight;
}

InteractionType classify_interaction(const ingest::TrackSeries& car,
                                     const std::vector<ingest::Track>& vrus,
                                     const BrakingEvent& braking, double frame_rate,
                                     const geom::SiteGeometry& geometry,
                                     const ExtractionConfig& cfg) {
  cfg.validate();
  if (braking.i_idx >= car.size() || braking.m_idx >= car.size())
    throw std::invalid_argument("classify_interaction: braking indices out of range");
  long f_lo = car.frames[braking.i_idx];
  long f_hi = car.frames[braking.m_idx] +
              static_cast<long>(std::llround(cfg.vru_overlap_margin * frame_rate));

  bool ped = false, cyc = false;
  for (const auto& vru : vrus) {
    auto cls = vru.meta.road_user_class;
    if (cls != ingest::RoadUserClass::pedestrian &&
        cls != ingest::RoadUserClass::bicycle)
      continue;
    const auto& s = vru.series;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s.frames[k] < f_lo || s.frames[k] > f_hi) continue;
      if (geom::point_in_polygon({s.x[k], s.y[k]}, geometry.crossing_polygon)) {
        if (cls == ingest::RoadUserClass::bicycle)
          cyc = true;
        else
          ped = true;
        break;
      }
    }
    if (cyc) break;  // bicycle precedence decides immediately
  }
  if (cyc) return InteractionType::int_cyc;
  if (ped) return InteractionType::int_ped;
  return InteractionType::no_interaction;
}

namespace {

// Pick the approach arm: the first entry line (filtered if requested, else
// in id order) the track actually crosses, subject to the arm's heading and
// corridor constraints evaluated at the first in-window frame.
struct ArmAssignment {
  std::string arm_id;
  std::vector<double> dist;
};

std::optional<ArmAssignment> assign_arm(const ingest::TrackSeries& track,
                                        const geom::SiteGeometry& geometry,
                                        const ExtractionConfig& cfg) {
  std::vector<std::string> candidates;
  if (cfg.arm_filter) {
    if (!geometry.entry_lines.count(*cfg.arm_filter))
      throw std::invalid_argument("arm filter '" + *cfg.arm_filter +
                                  "' not present in geometry");
    candidates.push_back(*cfg.arm_filter);
  } else {
    for (const auto& [id, seg] : geometry.entry_lines) candidates.push_back(id);
  }

  for (const auto& id : candidates) {
    std::vector<double> dist;
    try {
      dist = ingest::distance_to_crossing(track, geometry, id);
    } catch (const NoCrossingReachedError&) {
      continue;
    }
    auto arm_it = geometry.arms.find(id);
    if (arm_it != geometry.arms.end()) {
      std::size_t first_in_window = track.size();
      for (std::size_t k = 0; k < track.size(); ++k) {
        if (dist[k] > 0.0 && dist[k] <= cfg.approach_window_max) {
          first_in_window = k;
          break;
        }
      }
      if (first_in_window == track.size()) continue;
      const geom::ApproachArm& arm = arm_it->second;
      if (!arm.heading.contains(track.heading[first_in_window])) continue;
      if (!arm.corridor.empty() &&
          !geom::point_in_polygon({track.x[first_in_window], track.y[first_in_window]},
                                  arm.corridor))
        continue;
    }
    return ArmAssignment{id, std::move(dist)};
  }
  return std::nullopt;
}

}  // namespace

ExtractionResult extract_scenarios(const ingest::Recording& recording,
                                   const geom::SiteGeometry& geometry,
                                   const ExtractionConfig& cfg) {
  cfg.validate();

  std::vector<ingest::Track> vrus;
  for (const auto& tr : recording.tracks) {
    auto cls = tr.meta.road_user_class;
    if (cls == ingest::RoadUserClass::pedestrian || cls == ingest::RoadUserClass::bicycle)
      vrus.push_back(tr);
  }

  ExtractionResult result;
  for (const auto& tr : recording.tracks) {
    auto cls = tr.meta.road_user_class;
    if (cls != ingest::RoadUserClass::car && cls != ingest::RoadUserClass::truck_bus)
      continue;
    int id = tr.meta.track_id;
    try {
      auto arm = assign_arm(tr.series, geometry, cfg);
      if (!arm) {
        result.exclusions.push_back({id, "no matching approach arm"});
        continue;
      }
      std::vector<double> speed = ingest::speed_series(tr.series);
      BrakingEvent braking =
          detect_braking(speed, arm->dist, recording.frame_rate, cfg);
      ManeuverType mtype = classify_maneuver(tr.series, geometry, cfg);
      InteractionType itype = classify_interaction(tr.series, vrus, braking,
                                                   recording.frame_rate, geometry, cfg);
      double dav = compute_dav(braking.v_i, braking.v_m, braking.lv_i, braking.lv_m);
      result.records.push_back(ScenarioRecord::checked(
          id, braking.srt, braking.v_i, braking.lv_i, braking.v_m, braking.lv_m, dav,
          mtype, itype));
    } catch (const Error& e) {
      result.exclusions.push_back({id, e.what()});
    } catch (const std::invalid_argument& e) {
      result.exclusions.push_back({id, e.what()});
    }
  }

  std::sort(result.records.begin(), result.records.end(),
            [](const ScenarioRecord& a, const ScenarioRecord& b) {
              return a.track_id < b.track_id;
            });
  return result;
}

std::map<InteractionType, GroupMeans> describe(const std::vector<ScenarioRecord>& records) {
  std::map<InteractionType, GroupMeans> out;
  for (const auto& r : records) {
    GroupMeans& g = out.try_emplace(r.itype, GroupMeans{0, 0, 0, 0, 0, 0, 0}).first->second;
    ++g.n;
    g.v_i += r.v_i;
    g.lv_i += r.lv_i;
    g.v_m += r.v_m;
    g.lv_m += r.lv_m;
    g.dav += r.dav;
    g.srt += r.srt;
  }
  for (auto& [itype, g] : out) {
    g.v_i /= g.n;
    g.lv_i /= g.n;
    g.v_m /= g.n;
    g.lv_m /= g.n;
    g.dav /= g.n;
    g.srt /= g.n;
  }
  return out;
}

void write_scenario_csv(const std::filesystem::path& path,
                        const std::vector<ScenarioRecord>& records) {
  std::ostringstream out;
  out << "track_id,itype,mtype,v_i,lv_i,v_m,lv_m,dav,srt\n";
  const char* f = "%.6f";
  for (const auto& r : records)
    out << r.track_id << ',' << to_string(r.itype) << ',' << to_string(r.mtype) << ','
        << csv::fmt(r.v_i, f) << ',' << csv::fmt(r.lv_i, f) << ','
        << csv::fmt(r.v_m, f) << ',' << csv::fmt(r.lv_m, f) << ','
        << csv::fmt(r.dav, f) << ',' << csv::fmt(r.srt, f) << '\n';
  csv::write_atomic(path, out.str());
}

std::vector<ScenarioRecord> read_scenario_csv(const std::filesystem::path& path) {
  csv::Table t = csv::read_table(path);
  int c_id = t.require_col("track_id");
  int c_it = t.require_col("itype");
  int c_mt = t.require_col("mtype");
  int c_vi = t.require_col("v_i");
  int c_lvi = t.require_col("lv_i");
  int c_vm = t.require_col("v_m");
  int c_lvm = t.require_col("lv_m");
  int c_dav = t.require_col("dav");
  int c_srt = t.require_col("srt");

  std::vector<ScenarioRecord> records;
  for (const auto& row : t.rows) {
    records.push_back(ScenarioRecord::checked(
        csv::to_int(row[c_id], t.source), csv::to_double(row[c_srt], t.source),
        csv::to_double(row[c_vi], t.source), csv::to_double(row[c_lvi], t.source),
        csv::to_double(row[c_vm], t.source), csv::to_double(row[c_lvm], t.source),
        csv::to_double(row[c_dav], t.source), parse_maneuver(row[c_mt]),
        parse_interaction(row[c_it])));
  }
  return records;
}

}  // namespace srt::scenario
