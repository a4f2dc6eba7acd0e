#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace srt::geom {

struct Point {
  double x;
  double y;
};

// Simple (non-self-intersecting) polygon with at least 3 vertices.
using Polygon = std::vector<Point>;

struct Segment {
  Point a;
  Point b;
};

// Admissible heading range in degrees, [0,360); wraps when min > max.
struct HeadingInterval {
  double min_deg;
  double max_deg;
  bool contains(double heading_deg) const;
};

struct ApproachArm {
  std::string id;
  HeadingInterval heading;
  Polygon corridor;  // empty = no corridor constraint
};

struct SiteGeometry {
  Polygon crossing_polygon;
  std::map<std::string, Segment> entry_lines;  // keyed by arm id
  std::map<std::string, ApproachArm> arms;     // optional constraints per arm
  Polygon conflict_zone;
};

/// Load and validate a site geometry JSON file.
SiteGeometry load_site_geometry(const std::filesystem::path& path);

/// Validate polygon simplicity and heading ranges; throws SchemaError.
void validate_geometry(const SiteGeometry& g);

bool polygon_is_simple(const Polygon& poly);

/// Even-odd test; points on the boundary count as inside.
bool point_in_polygon(const Point& p, const Polygon& poly);

/// Earliest intersection of the directed segment p0->p1 with s, as the
/// parameter u in [0,1] along p0->p1. Endpoint touches count.
std::optional<double> segment_intersection_param(const Segment& s, const Point& p0,
                                                 const Point& p1);

/// Normalize an angle into [0, 360).
double wrap_angle_deg(double deg);

/// Signed difference to - from, wrapped into (-180, 180].
double signed_angle_diff_deg(double from_deg, double to_deg);

}  // namespace srt::geom
