#include "srt/geometry.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "srt/errors.hpp"

namespace srt::geom {

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const Point& p, const Point& a, const Point& b) {
  double span = std::max({std::fabs(a.x - b.x), std::fabs(a.y - b.y), 1.0});
  if (std::fabs(cross(a, b, p)) > 1e-9 * span * span) return false;
  return p.x >= std::min(a.x, b.x) - 1e-12 && p.x <= std::max(a.x, b.x) + 1e-12 &&
         p.y >= std::min(a.y, b.y) - 1e-12 && p.y <= std::max(a.y, b.y) + 1e-12;
}

bool segments_touch(const Point& a, const Point& b, const Point& c, const Point& d) {
  double d1 = cross(c, d, a);
  double d2 = cross(c, d, b);
  double d3 = cross(a, b, c);
  double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  return (d1 == 0 && on_segment(a, c, d)) || (d2 == 0 && on_segment(b, c, d)) ||
         (d3 == 0 && on_segment(c, a, b)) || (d4 == 0 && on_segment(d, a, b));
}

Polygon parse_polygon(const nlohmann::json& j, const std::string& name) {
  if (!j.is_array()) throw SchemaError("geometry: " + name + " must be an array");
  Polygon poly;
  for (const auto& v : j) {
    if (!v.is_array() || v.size() != 2)
      throw SchemaError("geometry: " + name + " vertices must be [x,y] pairs");
    poly.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  return poly;
}

void require_simple(const Polygon& poly, const std::string& name) {
  if (poly.size() < 3)
    throw SchemaError("geometry: " + name + " needs at least 3 vertices");
  if (!polygon_is_simple(poly))
    throw SchemaError("geometry: " + name + " is self-intersecting");
}

}  // namespace

bool HeadingInterval::contains(double heading_deg) const {
  double h = wrap_angle_deg(heading_deg);
  if (min_deg <= max_deg) return h >= min_deg && h <= max_deg;
  return h >= min_deg || h <= max_deg;  // interval wraps through 0
}

bool polygon_is_simple(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // skip edges sharing a vertex (consecutive, incl. the closing edge)
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_touch(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
        return false;
    }
  }
  return true;
}

bool point_in_polygon(const Point& p, const Polygon& poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
    if (on_segment(p, poly[i], poly[(i + 1) % n])) return true;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((poly[i].y > p.y) != (poly[j].y > p.y)) {
      double x_at = poly[j].x +
                    (p.y - poly[j].y) / (poly[i].y - poly[j].y) * (poly[i].x - poly[j].x);
      if (p.x < x_at) inside = !inside;
    }
  }
  return inside;
}

std::optional<double> segment_intersection_param(const Segment& s, const Point& p0,
                                                 const Point& p1) {
  double rx = s.b.x - s.a.x, ry = s.b.y - s.a.y;
  double dx = p1.x - p0.x, dy = p1.y - p0.y;
  double denom = rx * dy - ry * dx;
  double qpx = p0.x - s.a.x, qpy = p0.y - s.a.y;
  if (denom == 0.0) {
    // parallel; only a collinear overlap can intersect
    if (qpx * ry - qpy * rx != 0.0) return std::nullopt;
    double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return on_segment(p0, s.a, s.b) ? std::optional<double>(0.0)
                                                     : std::nullopt;
    auto param_of = [&](const Point& q) {
      return ((q.x - p0.x) * dx + (q.y - p0.y) * dy) / len2;
    };
    double ta = param_of(s.a), tb = param_of(s.b);
    double lo = std::max(0.0, std::min(ta, tb));
    double hi = std::min(1.0, std::max(ta, tb));
    if (lo > hi) return std::nullopt;
    return lo;
  }
  double t = (qpx * dy - qpy * dx) / denom;  // along s
  double u = (qpx * ry - qpy * rx) / denom;  // along p0->p1
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return u;
}

double wrap_angle_deg(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w < 0.0) w += 360.0;
  return w == 360.0 ? 0.0 : w;
}

double signed_angle_diff_deg(double from_deg, double to_deg) {
  double d = std::fmod(to_deg - from_deg, 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d;
}

void validate_geometry(const SiteGeometry& g) {
  require_simple(g.crossing_polygon, "crossing_polygon");
  require_simple(g.conflict_zone, "conflict_zone");
  for (const auto& [id, seg] : g.entry_lines) {
    if (seg.a.x == seg.b.x && seg.a.y == seg.b.y)
      throw SchemaError("geometry: entry line '" + id + "' is degenerate");
  }
  for (const auto& [id, arm] : g.arms) {
    if (!g.entry_lines.count(id))
      throw SchemaError("geometry: arm '" + id + "' has no entry line");
    auto bad = [](double h) { return !(h >= 0.0 && h < 360.0); };
    if (bad(arm.heading.min_deg) || bad(arm.heading.max_deg))
      throw SchemaError("geometry: arm '" + id + "' heading outside [0,360)");
    if (!arm.corridor.empty()) require_simple(arm.corridor, "arm '" + id + "' corridor");
  }
}

SiteGeometry load_site_geometry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open geometry file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }

  SiteGeometry g;
  try {
    g.crossing_polygon = parse_polygon(j.at("crossing_polygon"), "crossing_polygon");
    g.conflict_zone = parse_polygon(j.at("conflict_zone"), "conflict_zone");
    for (const auto& [id, seg] : j.at("entry_lines").items()) {
      Polygon pts = parse_polygon(seg, "entry line '" + id + "'");
      if (pts.size() != 2)
        throw SchemaError("geometry: entry line '" + id + "' must have 2 points");
      g.entry_lines[id] = {pts[0], pts[1]};
    }
    if (j.contains("arms")) {
      for (const auto& [id, spec] : j.at("arms").items()) {
        ApproachArm arm;
        arm.id = id;
        arm.heading = {spec.at("heading_min").get<double>(),
                       spec.at("heading_max").get<double>()};
        if (spec.contains("corridor"))
          arm.corridor = parse_polygon(spec.at("corridor"), "arm '" + id + "' corridor");
        g.arms[id] = std::move(arm);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  validate_geometry(g);
  return g;
}

}  // namespace srt::geom
