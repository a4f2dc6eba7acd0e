#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "srt/errors.hpp"
#include "srt/scenario.hpp"

using namespace srt;
using namespace srt::scenario;
namespace fs = std::filesystem;

TEST_CASE("linear ramp 8->1 over 75 frames gives srt = 3.0") {
  auto rec = fixture::ramp_recording();
  auto geometry = fixture::two_arm_site();
  ExtractionConfig cfg;

  const auto& car = rec.tracks[0];
  auto speed = ingest::speed_series(car.series);
  auto dist = ingest::distance_to_crossing(car.series, geometry, "right");
  auto braking = detect_braking(speed, dist, rec.frame_rate, cfg);

  CHECK(braking.i_idx == 0);
  CHECK(braking.m_idx == 75);
  CHECK(braking.srt == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(braking.v_i == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(braking.v_m == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(braking.lv_i - braking.lv_m == doctest::Approx(13.5).epsilon(1e-9));
}

TEST_CASE("constant speed never qualifies as braking") {
  std::vector<double> speed(100, 5.0);
  std::vector<double> dist(100);
  for (int k = 0; k < 100; ++k) dist[k] = 50.0 - 0.2 * k;
  ExtractionConfig cfg;
  CHECK_THROWS_AS(detect_braking(speed, dist, 25.0, cfg), NoDecelerationError);
}

TEST_CASE("empty approach window is reported") {
  std::vector<double> speed(10, 5.0);
  std::vector<double> dist(10, 120.0);  // always beyond the window
  ExtractionConfig cfg;
  CHECK_THROWS_AS(detect_braking(speed, dist, 25.0, cfg), EmptyWindowError);
}

TEST_CASE("average deceleration formula") {
  CHECK(compute_dav(8.0, 2.0, 40.0, 10.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(compute_dav(5.0, 5.0, 12.0, 3.0) == 0.0);
  CHECK_THROWS_AS(compute_dav(5.0, 5.0, 10.0, 10.0), DegenerateDistanceError);
}

TEST_CASE("dav matches a constant-deceleration finite-difference oracle") {
  // car braking at a constant 1.25 m/s^2 from 9 m/s
  const double a = 1.25, v0 = 9.0, fps = 25.0, dt = 1.0 / fps;
  std::vector<double> speeds;
  for (double v = v0; v > 1.0; v -= a * dt) speeds.push_back(v);
  for (int k = 0; k < 120; ++k) speeds.push_back(speeds.back());
  auto series = fixture::straight_car_series(1, 0, -25.0, speeds, fps);
  auto geometry = fixture::two_arm_site();
  ExtractionConfig cfg;
  auto dist = ingest::distance_to_crossing(series, geometry, "right");
  auto speed = ingest::speed_series(series);
  auto braking = detect_braking(speed, dist, fps, cfg);
  double dav = compute_dav(braking.v_i, braking.v_m, braking.lv_i, braking.lv_m);
  // kinematics: (v_i^2 - v_m^2) / (2 d) equals the true deceleration when
  // positions integrate the trapezoid exactly
  CHECK(dav == doctest::Approx(a).epsilon(1e-9));
}

namespace {

// circular-arc track sweeping the heading by delta_deg inside a huge zone
ingest::TrackSeries arc_track(double heading0, double delta_deg, int n = 50) {
  ingest::TrackSeries s;
  s.track_id = 11;
  const double radius = 10.0;
  for (int k = 0; k < n; ++k) {
    double sweep = delta_deg * k / (n - 1);
    double theta = (heading0 + 90.0 + sweep) * M_PI / 180.0;
    s.frames.push_back(k);
    s.x.push_back(radius * std::cos(theta));
    s.y.push_back(radius * std::sin(theta));
    s.heading.push_back(geom::wrap_angle_deg(heading0 + sweep));
    s.vx.push_back(0.0);
    s.vy.push_back(0.0);
  }
  return s;
}

geom::SiteGeometry big_zone_site() {
  auto g = fixture::two_arm_site();
  g.conflict_zone = {{-50.0, -50.0}, {50.0, -50.0}, {50.0, 50.0}, {-50.0, 50.0}};
  return g;
}

}  // namespace

TEST_CASE("maneuver classification by net heading change") {
  auto geometry = big_zone_site();
  ExtractionConfig cfg;
  CHECK(classify_maneuver(arc_track(10.0, 90.0), geometry, cfg) ==
        ManeuverType::turning_left);
  CHECK(classify_maneuver(arc_track(10.0, 0.0), geometry, cfg) ==
        ManeuverType::straight);
  CHECK(classify_maneuver(arc_track(45.0, -88.0), geometry, cfg) ==
        ManeuverType::turning_right);
  // wrap across 0/360
  CHECK(classify_maneuver(arc_track(350.0, 60.0), geometry, cfg) ==
        ManeuverType::turning_left);
  CHECK(classify_maneuver(arc_track(20.0, -60.0), geometry, cfg) ==
        ManeuverType::turning_right);
  CHECK(classify_maneuver(arc_track(0.0, 44.9), geometry, cfg) ==
        ManeuverType::straight);
}

TEST_CASE("maneuver labels survive global rotation of the site frame") {
  ExtractionConfig cfg;
  auto geometry = big_zone_site();
  for (double sweep : {-88.0, -20.0, 0.0, 30.0, 90.0}) {
    auto track = arc_track(15.0, sweep);
    auto base = classify_maneuver(track, geometry, cfg);
    for (double angle : {33.0, 120.0, 275.0}) {
      auto r_track = fixture::rotate_series(track, angle);
      auto r_geom = fixture::rotate_geometry(geometry, angle);
      CHECK(classify_maneuver(r_track, r_geom, cfg) == base);
    }
  }
}

TEST_CASE("track never touching the conflict zone is rejected") {
  auto geometry = fixture::two_arm_site();
  ingest::TrackSeries s;
  s.track_id = 2;
  for (int k = 0; k < 5; ++k) {
    s.frames.push_back(k);
    s.x.push_back(-30.0 + k);
    s.y.push_back(0.0);
    s.heading.push_back(0.0);
    s.vx.push_back(1.0);
    s.vy.push_back(0.0);
  }
  ExtractionConfig cfg;
  CHECK_THROWS_AS(classify_maneuver(s, geometry, cfg), NoConflictZoneTransitError);
}

TEST_CASE("interaction classification and bicycle precedence") {
  auto geometry = fixture::two_arm_site();
  ExtractionConfig cfg;
  auto car = fixture::ramp_car();
  auto speed = ingest::speed_series(car.series);
  auto dist = ingest::distance_to_crossing(car.series, geometry, "right");
  auto braking = detect_braking(speed, dist, 25.0, cfg);

  std::vector<ingest::Track> none;
  CHECK(classify_interaction(car.series, none, braking, 25.0, geometry, cfg) ==
        InteractionType::no_interaction);

  std::vector<ingest::Track> ped = {fixture::pedestrian_in_crossing(2, 70, 80)};
  CHECK(classify_interaction(car.series, ped, braking, 25.0, geometry, cfg) ==
        InteractionType::int_ped);

  std::vector<ingest::Track> both = {fixture::pedestrian_in_crossing(2, 70, 80),
                                     fixture::bicycle_in_crossing(3, 70, 80)};
  CHECK(classify_interaction(car.series, both, braking, 25.0, geometry, cfg) ==
        InteractionType::int_cyc);

  // pedestrian outside the occupancy window does not count
  std::vector<ingest::Track> late = {fixture::pedestrian_in_crossing(2, 150, 200)};
  CHECK(classify_interaction(car.series, late, braking, 25.0, geometry, cfg) ==
        InteractionType::no_interaction);

  // pedestrian within the +1 s margin after the minimum does count
  std::vector<ingest::Track> margin = {fixture::pedestrian_in_crossing(2, 95, 100)};
  CHECK(classify_interaction(car.series, margin, braking, 25.0, geometry, cfg) ==
        InteractionType::int_ped);
}

TEST_CASE("end-to-end extraction of the pedestrian-yield fixture") {
  auto rec = fixture::ramp_recording(/*with_pedestrian=*/true);
  auto geometry = fixture::two_arm_site();
  ExtractionConfig cfg;
  auto result = extract_scenarios(rec, geometry, cfg);

  REQUIRE(result.records.size() == 1);
  const auto& r = result.records[0];
  CHECK(r.track_id == 1);
  CHECK(r.itype == InteractionType::int_ped);
  CHECK(r.mtype == ManeuverType::straight);
  CHECK(r.srt == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.v_i == doctest::Approx(8.0));
  CHECK(r.v_m == doctest::Approx(1.0));
  double expected_dav = (64.0 - 1.0) / (2.0 * (r.lv_i - r.lv_m));
  CHECK(r.dav == doctest::Approx(expected_dav).epsilon(1e-12));
  CHECK(result.exclusions.empty());
}

TEST_CASE("empty recording extracts nothing") {
  ingest::Recording rec;
  rec.recording_id = 1;
  rec.frame_rate = 25.0;
  auto result = extract_scenarios(rec, fixture::two_arm_site(), ExtractionConfig{});
  CHECK(result.records.empty());
  CHECK(result.exclusions.empty());
}

TEST_CASE("non-braking cars are excluded with a reason") {
  auto rec = fixture::ramp_recording();
  // constant-speed car through the same corridor
  std::vector<double> flat(200, 6.0);
  ingest::Track cruiser;
  cruiser.series = fixture::straight_car_series(9, 0, -30.0, flat);
  cruiser.meta = {9, ingest::RoadUserClass::car, 0, 199};
  rec.tracks.push_back(cruiser);

  auto result = extract_scenarios(rec, fixture::two_arm_site(), ExtractionConfig{});
  REQUIRE(result.records.size() == 1);
  REQUIRE(result.exclusions.size() == 1);
  CHECK(result.exclusions[0].track_id == 9);
  CHECK(result.exclusions[0].reason.find("min_drop") != std::string::npos);
}

TEST_CASE("extraction is deterministic: identical inputs, identical tables") {
  auto rec = fixture::ramp_recording(true, true);
  auto geometry = fixture::two_arm_site();
  ExtractionConfig cfg;
  auto a = extract_scenarios(rec, geometry, cfg);
  auto b = extract_scenarios(rec, geometry, cfg);

  auto csv_a = fs::temp_directory_path() / ("srt_det_a_" + std::to_string(getpid()));
  auto csv_b = fs::temp_directory_path() / ("srt_det_b_" + std::to_string(getpid()));
  write_scenario_csv(csv_a, a.records);
  write_scenario_csv(csv_b, b.records);
  std::ifstream fa(csv_a), fb(csv_b);
  std::string sa((std::istreambuf_iterator<char>(fa)), {});
  std::string sb((std::istreambuf_iterator<char>(fb)), {});
  CHECK(sa == sb);
  CHECK(!sa.empty());
  fs::remove(csv_a);
  fs::remove(csv_b);
}

TEST_CASE("scenario table round trips through CSV") {
  auto rec = fixture::ramp_recording(true);
  auto result = extract_scenarios(rec, fixture::two_arm_site(), ExtractionConfig{});
  auto path = fs::temp_directory_path() / ("srt_tbl_" + std::to_string(getpid()));
  write_scenario_csv(path, result.records);
  auto back = read_scenario_csv(path);
  REQUIRE(back.size() == result.records.size());
  CHECK(back[0].track_id == result.records[0].track_id);
  CHECK(back[0].itype == result.records[0].itype);
  CHECK(back[0].srt == doctest::Approx(result.records[0].srt).epsilon(1e-6));
  fs::remove(path);
}

TEST_CASE("describe means per interaction type") {
  auto make = [](int id, double srt, InteractionType itype) {
    return ScenarioRecord::checked(id, srt, 8.0, 40.0, 2.0, 8.0, 1.0,
                                   ManeuverType::straight, itype);
  };
  SUBCASE("single record is its own mean") {
    auto groups = describe({make(1, 4.0, InteractionType::no_interaction)});
    REQUIRE(groups.size() == 1);
    const auto& g = groups.at(InteractionType::no_interaction);
    CHECK(g.n == 1);
    CHECK(g.srt == doctest::Approx(4.0));
    CHECK(g.v_i == doctest::Approx(8.0));
  }
  SUBCASE("two records average") {
    auto groups = describe({make(1, 4.0, InteractionType::int_ped),
                            make(2, 6.0, InteractionType::int_ped)});
    CHECK(groups.at(InteractionType::int_ped).srt == doctest::Approx(5.0));
    CHECK(groups.size() == 1);  // empty groups omitted
  }
  SUBCASE("empty input") { CHECK(describe({}).empty()); }
}

TEST_CASE("scenario record invariants are enforced") {
  CHECK_THROWS_AS(ScenarioRecord::checked(1, 0.0, 8, 40, 2, 8, 1,
                                          ManeuverType::straight,
                                          InteractionType::no_interaction),
                  std::invalid_argument);
  CHECK_THROWS_AS(ScenarioRecord::checked(1, 3.0, 2, 40, 8, 8, 1,
                                          ManeuverType::straight,
                                          InteractionType::no_interaction),
                  std::invalid_argument);
  CHECK_THROWS_AS(ScenarioRecord::checked(1, 3.0, 8, 8, 2, 40, 1,
                                          ManeuverType::straight,
                                          InteractionType::no_interaction),
                  std::invalid_argument);
  CHECK_THROWS_AS(ScenarioRecord::checked(1, 3.0, 8, 40, 2, 8, -0.1,
                                          ManeuverType::straight,
                                          InteractionType::no_interaction),
                  std::invalid_argument);
}

TEST_CASE("extraction config validation") {
  ExtractionConfig cfg;
  cfg.turn_threshold = 95.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ExtractionConfig{};
  cfg.min_drop = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ExtractionConfig{};
  cfg.approach_window_max = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
