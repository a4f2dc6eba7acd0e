#include "srt/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "srt/csv.hpp"
#include "srt/errors.hpp"

namespace srt::ingest {

RoadUserClass class_from_string(const std::string& label) {
  if (label == "car") return RoadUserClass::car;
  if (label == "truck_bus") return RoadUserClass::truck_bus;
  if (label == "pedestrian") return RoadUserClass::pedestrian;
  if (label == "bicycle") return RoadUserClass::bicycle;
  throw ClassUnknownError(label);
}

std::string to_string(RoadUserClass c) {
  switch (c) {
    case RoadUserClass::car: return "car";
    case RoadUserClass::truck_bus: return "truck_bus";
    case RoadUserClass::pedestrian: return "pedestrian";
    case RoadUserClass::bicycle: return "bicycle";
  }
  return "?";
}

Recording parse_recording(const std::filesystem::path& tracks_path,
                          const std::filesystem::path& meta_path,
                          const std::filesystem::path& recording_meta_path) {
  Recording rec;

  {
    csv::Table t = csv::read_table(recording_meta_path);
    int c_id = t.require_col("recordingId");
    int c_fr = t.require_col("frameRate");
    if (t.rows.empty()) throw ParseError(t.source + ": no recording row");
    rec.recording_id = csv::to_int(t.rows[0][c_id], t.source);
    rec.frame_rate = csv::to_double(t.rows[0][c_fr], t.source);
    if (!(rec.frame_rate > 0.0))
      throw ParseError(t.source + ": frameRate must be positive");
  }

  std::map<int, TrackMeta> metas;
  {
    csv::Table t = csv::read_table(meta_path);
    int c_id = t.require_col("trackId");
    int c_class = t.require_col("class");
    int c_init = t.require_col("initialFrame");
    int c_final = t.require_col("finalFrame");
    for (const auto& row : t.rows) {
      TrackMeta m;
      m.track_id = csv::to_int(row[c_id], t.source);
      m.road_user_class = class_from_string(row[c_class]);
      m.initial_frame = csv::to_long(row[c_init], t.source);
      m.final_frame = csv::to_long(row[c_final], t.source);
      if (m.final_frame < m.initial_frame)
        throw ParseError(t.source + ": track " + std::to_string(m.track_id) +
                         ": finalFrame before initialFrame");
      if (!metas.emplace(m.track_id, m).second)
        throw ParseError(t.source + ": duplicate trackId " +
                         std::to_string(m.track_id));
    }
  }

  std::map<int, TrackSeries> series;
  {
    csv::Table t = csv::read_table(tracks_path);
    int c_rec = t.require_col("recordingId");
    int c_id = t.require_col("trackId");
    int c_frame = t.require_col("frame");
    int c_x = t.require_col("xCenter");
    int c_y = t.require_col("yCenter");
    int c_h = t.require_col("heading");
    int c_vx = t.require_col("xVelocity");
    int c_vy = t.require_col("yVelocity");
    for (const auto& row : t.rows) {
      int rid = csv::to_int(row[c_rec], t.source);
      if (rid != rec.recording_id)
        throw ParseError(t.source + ": recordingId " + std::to_string(rid) +
                         " does not match recording meta");
      int id = csv::to_int(row[c_id], t.source);
      long frame = csv::to_long(row[c_frame], t.source);
      TrackSeries& s = series[id];
      if (s.frames.empty()) {
        s.track_id = id;
      } else if (frame != s.frames.back() + 1) {
        throw FrameGapError(id, frame);
      }
      s.frames.push_back(frame);
      s.x.push_back(csv::to_double(row[c_x], t.source));
      s.y.push_back(csv::to_double(row[c_y], t.source));
      s.heading.push_back(geom::wrap_angle_deg(csv::to_double(row[c_h], t.source)));
      s.vx.push_back(csv::to_double(row[c_vx], t.source));
      s.vy.push_back(csv::to_double(row[c_vy], t.source));
    }
  }

  for (const auto& [id, m] : metas) {
    auto it = series.find(id);
    if (it == series.end())
      throw ParseError("track " + std::to_string(id) + " has no samples in " +
                       tracks_path.string());
    const TrackSeries& s = it->second;
    if (s.frames.front() != m.initial_frame || s.frames.back() != m.final_frame)
      throw ParseError("track " + std::to_string(id) +
                       ": frame range does not match tracksMeta");
    rec.tracks.push_back({m, s});
  }
  for (const auto& [id, s] : series)
    if (!metas.count(id))
      throw ParseError("track " + std::to_string(id) + " missing from " +
                       meta_path.string());

  std::sort(rec.tracks.begin(), rec.tracks.end(),
            [](const Track& a, const Track& b) { return a.meta.track_id < b.meta.track_id; });
  return rec;
}

void write_recording(const Recording& rec, const std::filesystem::path& tracks_path,
                     const std::filesystem::path& meta_path,
                     const std::filesystem::path& recording_meta_path) {
  const char* g = "%.17g";
  {
    std::ostringstream out;
    out << "recordingId,frameRate\n"
        << rec.recording_id << ',' << csv::fmt(rec.frame_rate, g) << '\n';
    csv::write_atomic(recording_meta_path, out.str());
  }
  {
    std::ostringstream out;
    out << "trackId,class,initialFrame,finalFrame\n";
    for (const auto& tr : rec.tracks)
      out << tr.meta.track_id << ',' << to_string(tr.meta.road_user_class) << ','
          << tr.meta.initial_frame << ',' << tr.meta.final_frame << '\n';
    csv::write_atomic(meta_path, out.str());
  }
  {
    std::ostringstream out;
    out << "recordingId,trackId,frame,xCenter,yCenter,heading,xVelocity,yVelocity\n";
    for (const auto& tr : rec.tracks) {
      const TrackSeries& s = tr.series;
      for (std::size_t k = 0; k < s.size(); ++k)
        out << rec.recording_id << ',' << s.track_id << ',' << s.frames[k] << ','
            << csv::fmt(s.x[k], g) << ',' << csv::fmt(s.y[k], g) << ','
            << csv::fmt(s.heading[k], g) << ',' << csv::fmt(s.vx[k], g) << ','
            << csv::fmt(s.vy[k], g) << '\n';
    }
    csv::write_atomic(tracks_path, out.str());
  }
}

std::vector<double> speed_series(const TrackSeries& track) {
  std::vector<double> speed(track.size());
  for (std::size_t k = 0; k < track.size(); ++k)
    speed[k] = std::hypot(track.vx[k], track.vy[k]);
  return speed;
}

std::vector<double> distance_to_crossing(const TrackSeries& track,
                                         const geom::SiteGeometry& geometry,
                                         const std::string& arm_id) {
  auto it = geometry.entry_lines.find(arm_id);
  if (it == geometry.entry_lines.end())
    throw std::invalid_argument("unknown arm '" + arm_id + "'");
  const geom::Segment& entry = it->second;

  const std::size_t n = track.size();
  if (n == 0) throw NoCrossingReachedError(track.track_id);

  // cumulative arc length along the recorded polyline
  std::vector<double> s(n, 0.0);
  for (std::size_t k = 1; k < n; ++k)
    s[k] = s[k - 1] + std::hypot(track.x[k] - track.x[k - 1],
                                 track.y[k] - track.y[k - 1]);

  // first polyline segment meeting the entry line, first touch within it
  double s_cross = -1.0;
  bool found = false;
  if (n == 1) {
    geom::Point p{track.x[0], track.y[0]};
    if (auto u = geom::segment_intersection_param(entry, p, p)) {
      s_cross = 0.0;
      found = true;
    }
  }
  for (std::size_t k = 0; !found && k + 1 < n; ++k) {
    geom::Point p0{track.x[k], track.y[k]};
    geom::Point p1{track.x[k + 1], track.y[k + 1]};
    if (auto u = geom::segment_intersection_param(entry, p0, p1)) {
      s_cross = s[k] + *u * (s[k + 1] - s[k]);
      found = true;
    }
  }
  if (!found) throw NoCrossingReachedError(track.track_id);

  std::vector<double> d(n);
  for (std::size_t k = 0; k < n; ++k) d[k] = s_cross - s[k];
  return d;
}

}  // namespace srt::ingest
