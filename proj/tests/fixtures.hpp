#pragma once

// Synthetic recordings and site geometry used across the pipeline tests.

#include <cmath>
#include <string>
#include <vector>

#include "srt/geometry.hpp"
#include "srt/ingest.hpp"

namespace fixture {

using srt::geom::Point;
using srt::geom::SiteGeometry;
using srt::ingest::Recording;
using srt::ingest::RoadUserClass;
using srt::ingest::Track;
using srt::ingest::TrackSeries;

// Site on a west-east axis: cars driving +x cross the entry line at x = 0,
// the zebra band just beyond it, then the conflict zone. A mirrored "left"
// arm serves tracks driving -x.
inline SiteGeometry two_arm_site() {
  SiteGeometry g;
  g.entry_lines["right"] = {{0.0, -6.0}, {0.0, 6.0}};
  g.entry_lines["left"] = {{0.3, -6.0}, {0.3, 6.0}};
  g.crossing_polygon = {{0.0, -6.0}, {1.2, -6.0}, {1.2, 6.0}, {0.0, 6.0}};
  g.conflict_zone = {{1.5, -4.0}, {4.0, -4.0}, {4.0, 4.0}, {1.5, 4.0}};
  g.arms["right"] = {"right", {315.0, 45.0}, {}};   // heading ~0, wraps
  g.arms["left"] = {"left", {135.0, 225.0}, {}};    // heading ~180
  return g;
}

// Straight-line car driving +x with the given per-frame speeds; positions
// integrate the trapezoid of consecutive speeds at 25 fps. Returns the
// series; headings constant 0.
inline TrackSeries straight_car_series(int track_id, long first_frame, double x0,
                                       const std::vector<double>& speeds,
                                       double frame_rate = 25.0, double y = 0.0) {
  TrackSeries s;
  s.track_id = track_id;
  double x = x0;
  const double dt = 1.0 / frame_rate;
  for (std::size_t k = 0; k < speeds.size(); ++k) {
    if (k > 0) x += 0.5 * (speeds[k - 1] + speeds[k]) * dt;
    s.frames.push_back(first_frame + static_cast<long>(k));
    s.x.push_back(x);
    s.y.push_back(y);
    s.heading.push_back(0.0);
    s.vx.push_back(speeds[k]);
    s.vy.push_back(0.0);
  }
  return s;
}

// The constructed deceleration profile: 8 -> 1 m/s linearly over 75 frame
// gaps (76 samples), then a constant 1 m/s tail long enough to cross the
// entry line and transit the conflict zone.
inline std::vector<double> ramp_speeds(int tail_frames = 160) {
  std::vector<double> v;
  for (int k = 0; k <= 75; ++k) v.push_back(8.0 - 7.0 * k / 75.0);
  for (int k = 0; k < tail_frames; ++k) v.push_back(1.0);
  return v;
}

// Pedestrian standing inside the zebra band over the given frame range.
inline Track pedestrian_in_crossing(int track_id, long first_frame, long last_frame,
                                    double x = 0.6, double y = 1.0) {
  Track t;
  t.meta = {track_id, RoadUserClass::pedestrian, first_frame, last_frame};
  t.series.track_id = track_id;
  for (long f = first_frame; f <= last_frame; ++f) {
    t.series.frames.push_back(f);
    t.series.x.push_back(x);
    t.series.y.push_back(y);
    t.series.heading.push_back(90.0);
    t.series.vx.push_back(0.0);
    t.series.vy.push_back(0.0);
  }
  return t;
}

inline Track bicycle_in_crossing(int track_id, long first_frame, long last_frame,
                                 double x = 0.6, double y = -1.0) {
  Track t = pedestrian_in_crossing(track_id, first_frame, last_frame, x, y);
  t.meta.track_id = track_id;
  t.meta.road_user_class = RoadUserClass::bicycle;
  t.series.track_id = track_id;
  return t;
}

// One decelerating car (the ramp fixture) approaching from the right arm,
// starting 14.2 m before the entry line so the whole ramp sits inside a
// 60 m approach window.
inline Track ramp_car(int track_id = 1, long first_frame = 0) {
  Track t;
  std::vector<double> speeds = ramp_speeds();
  t.series = straight_car_series(track_id, first_frame, -14.2, speeds);
  t.meta = {track_id, RoadUserClass::car, first_frame,
            first_frame + static_cast<long>(speeds.size()) - 1};
  return t;
}

inline Recording ramp_recording(bool with_pedestrian = false,
                                bool with_bicycle = false) {
  Recording rec;
  rec.recording_id = 7;
  rec.frame_rate = 25.0;
  rec.tracks.push_back(ramp_car());
  if (with_pedestrian) rec.tracks.push_back(pedestrian_in_crossing(2, 0, 235));
  if (with_bicycle) rec.tracks.push_back(bicycle_in_crossing(3, 0, 235));
  return rec;
}

// Rotate a point around the origin by deg (counterclockwise).
inline Point rotate(const Point& p, double deg) {
  double rad = deg * M_PI / 180.0;
  double c = std::cos(rad), s = std::sin(rad);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

inline TrackSeries rotate_series(const TrackSeries& in, double deg) {
  TrackSeries out = in;
  double rad = deg * M_PI / 180.0;
  double c = std::cos(rad), s = std::sin(rad);
  for (std::size_t k = 0; k < in.size(); ++k) {
    Point p = rotate({in.x[k], in.y[k]}, deg);
    out.x[k] = p.x;
    out.y[k] = p.y;
    out.heading[k] = srt::geom::wrap_angle_deg(in.heading[k] + deg);
    out.vx[k] = c * in.vx[k] - s * in.vy[k];
    out.vy[k] = s * in.vx[k] + c * in.vy[k];
  }
  return out;
}

inline SiteGeometry rotate_geometry(const SiteGeometry& in, double deg) {
  SiteGeometry out = in;
  auto rot_poly = [&](srt::geom::Polygon& poly) {
    for (auto& p : poly) p = rotate(p, deg);
  };
  rot_poly(out.crossing_polygon);
  rot_poly(out.conflict_zone);
  for (auto& [id, seg] : out.entry_lines) {
    seg.a = rotate(seg.a, deg);
    seg.b = rotate(seg.b, deg);
  }
  for (auto& [id, arm] : out.arms) {
    arm.heading.min_deg = srt::geom::wrap_angle_deg(arm.heading.min_deg + deg);
    arm.heading.max_deg = srt::geom::wrap_angle_deg(arm.heading.max_deg + deg);
    rot_poly(arm.corridor);
  }
  return out;
}

}  // namespace fixture
