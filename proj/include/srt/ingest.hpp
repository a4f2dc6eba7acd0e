#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "srt/geometry.hpp"

namespace srt::ingest {

enum class RoadUserClass { car, truck_bus, pedestrian, bicycle };

RoadUserClass class_from_string(const std::string& label);
std::string to_string(RoadUserClass c);

struct TrackMeta {
  int track_id;
  RoadUserClass road_user_class;
  long initial_frame;
  long final_frame;
};

// Frame-indexed kinematics; all arrays share one length and frames are
// strictly consecutive. Headings in degrees [0,360), counterclockwise.
struct TrackSeries {
  int track_id;
  std::vector<long> frames;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> heading;
  std::vector<double> vx;
  std::vector<double> vy;

  std::size_t size() const { return frames.size(); }
};

struct Track {
  TrackMeta meta;
  TrackSeries series;
};

struct Recording {
  int recording_id;
  double frame_rate;
  std::vector<Track> tracks;  // sorted by track_id
};

/// Parse an inD-style recording from its three CSV files. Validates column
/// presence, frame consecutiveness, class labels, and meta/series agreement.
Recording parse_recording(const std::filesystem::path& tracks_path,
                          const std::filesystem::path& meta_path,
                          const std::filesystem::path& recording_meta_path);

/// Inverse of parse_recording, full double precision.
void write_recording(const Recording& rec, const std::filesystem::path& tracks_path,
                     const std::filesystem::path& meta_path,
                     const std::filesystem::path& recording_meta_path);

/// Per-frame speed magnitude sqrt(vx^2 + vy^2).
std::vector<double> speed_series(const TrackSeries& track);

/// Arc length along the recorded trajectory from each frame to the first
/// crossing of the arm's entry line; negative once past it. Throws
/// NoCrossingReachedError when the path never meets the line.
std::vector<double> distance_to_crossing(const TrackSeries& track,
                                         const geom::SiteGeometry& geometry,
                                         const std::string& arm_id);

}  // namespace srt::ingest
