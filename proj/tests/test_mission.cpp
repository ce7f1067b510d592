#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "uavlight/errors.hpp"
#include "uavlight/geometry.hpp"
#include "uavlight/mission.hpp"

using namespace uavlight;

TEST_CASE("flight params point the nose at the target") {
  UavPose home{0, 0, 0};

  FlightParams north = derive_flight_params(home, 0.0, 5.0, 1.5, 2.2);
  CHECK(north.rotate_cw_deg == doctest::Approx(0.0));
  CHECK(north.forward_m == doctest::Approx(5.0));

  FlightParams east = derive_flight_params(home, 5.0, 0.0, 1.5, 2.2);
  CHECK(east.rotate_cw_deg == doctest::Approx(90.0));

  FlightParams south = derive_flight_params(home, 0.0, -5.0, 1.5, 2.2);
  CHECK(south.rotate_cw_deg == doctest::Approx(180.0));

  FlightParams west = derive_flight_params(home, -5.0, 0.0, 1.5, 2.2);
  CHECK(west.rotate_cw_deg == doctest::Approx(270.0));

  FlightParams diag = derive_flight_params(UavPose{1, 1, 0}, 2.0, 2.0, 1.5, 2.2);
  CHECK(diag.rotate_cw_deg == doctest::Approx(45.0));
  CHECK(diag.forward_m == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("zero travel keeps the heading") {
  FlightParams fp = derive_flight_params(UavPose{3, 3, 0}, 3.0, 3.0, 1.5, 2.2);
  CHECK(fp.rotate_cw_deg == 0.0);
  CHECK(fp.forward_m == 0.0);
}

TEST_CASE("transit below service height is rejected") {
  CHECK_THROWS_AS(derive_flight_params(UavPose{0, 0, 0}, 1.0, 0.0, 2.0, 1.5),
                  ValidationError);
}

TEST_CASE("cycle phases follow distance over speed") {
  FlightParams fp;
  fp.rotate_cw_deg = 0.0;
  fp.forward_m = 10.0;
  fp.service_height = 2.0;
  fp.transit_height = 3.0;

  CycleBuild cb = build_cycle(fp, 1.0, 0.7, 1.0, 60.0, 0.0);
  CHECK(cb.cycle.t_off == doctest::Approx(3.0 / 0.7));
  CHECK(cb.cycle.t_deploy == doctest::Approx(10.0));
  CHECK(cb.cycle.t_light == doctest::Approx(60.0));
  CHECK(cb.cycle.t_back == doctest::Approx(10.0));
  CHECK(cb.cycle.t_land == doctest::Approx(2.0 / 0.7));
  CHECK(cb.cycle.total() == doctest::Approx(3.0 / 0.7 + 10.0 + 60.0 + 10.0 +
                                            2.0 / 0.7));

  // The trip additionally descends from transit to service height, which
  // the five phase numbers do not carry.
  double seg_total = 0.0;
  for (const auto& seg : cb.segments) seg_total += seg.duration;
  CHECK(seg_total == doctest::Approx(cb.cycle.total() + 1.0 / 0.7));
}

TEST_CASE("a pre deploy wait holds at takeoff height") {
  FlightParams fp;
  fp.forward_m = 5.0;
  fp.service_height = 1.5;
  fp.transit_height = 2.2;
  CycleBuild cb = build_cycle(fp, 1.0, 0.7, 1.0, 10.0, 30.0);

  REQUIRE(cb.segments.size() >= 3);
  CHECK(cb.segments[0].dz == doctest::Approx(1.0));
  CHECK(cb.segments[1].speed == 0.0);
  CHECK(cb.segments[1].duration == doctest::Approx(30.0));
  CHECK(cb.segments[2].dz == doctest::Approx(1.2));
}

TEST_CASE("replayed segments close the loop at home") {
  FlightParams fp;
  fp.rotate_cw_deg = 123.0;
  fp.forward_m = 7.5;
  fp.service_height = 1.5;
  fp.transit_height = 2.2;
  CycleBuild cb = build_cycle(fp, 1.0, 0.7, 1.0, 25.0, 0.0);

  UavPose home{4.0, -2.0, 0.0};
  auto track = replay_positions(home, cb.segments);
  REQUIRE(!track.empty());
  const UavPose& last = track.back();
  CHECK(std::fabs(last.x - home.x) <= 1e-9);
  CHECK(std::fabs(last.y - home.y) <= 1e-9);
  CHECK(std::fabs(last.z) <= 1e-9);
}

TEST_CASE("dense plan sends one drone and covers everyone") {
  Scenario s = testutil::dense_scenario();
  MissionPlan plan = plan_mission(s);

  REQUIRE(plan.uavs.size() == 1);
  const UavMission& u = plan.uavs[0];
  CHECK_FALSE(u.is_relief);
  CHECK(u.uav_index == 0);
  CHECK(u.user_indices.size() == s.users.size());

  double want = 0.0;
  for (const auto& user : s.users) want = std::max(want, user.t_user);
  CHECK(u.t_light_required == doctest::Approx(want));
  CHECK(u.t_light_planned == doctest::Approx(want));

  LightingDisk disk = lighting_disk(
      UavPose{u.target_x, u.target_y, u.flight.service_height},
      plan.light_angle_deg);
  for (const auto& user : s.users) CHECK(disk.covers(user.x, user.y));

  CHECK(plan.battery_full_pct - u.energy.pct_total >=
        plan.reserve_floor_pct - 1e-9);
}

TEST_CASE("plan timeline spans takeoff to the last landing") {
  Scenario s = testutil::dense_scenario();
  MissionPlan plan = plan_mission(s);
  const UavMission& u = plan.uavs[0];

  double deploy_run = (u.flight.transit_height - s.takeoff_altitude) / s.speed_vertical +
                      u.flight.forward_m / s.speed_horizontal +
                      (u.flight.transit_height - u.flight.service_height) / s.speed_vertical;
  double takeoff = s.takeoff_altitude / s.speed_vertical;
  double ret = u.flight.forward_m / s.speed_horizontal +
               u.flight.service_height / s.speed_vertical;
  CHECK(u.arrival_s == doctest::Approx(takeoff + deploy_run));
  CHECK(plan.mission_span_s ==
        doctest::Approx(takeoff + deploy_run + u.t_light_planned + ret));

  REQUIRE(plan.timeline.size() >= 3);
  CHECK(plan.timeline.front().type == StepType::deploy);
  CHECK(plan.timeline.back().type == StepType::ret);
}

TEST_CASE("every planned trajectory replays back to its home") {
  for (const Scenario& s : {testutil::dense_scenario(),
                            testutil::sparse_scenario(),
                            testutil::relief_scenario()}) {
    MissionPlan plan = plan_mission(s);
    for (const auto& u : plan.uavs) {
      auto track = replay_positions(u.home, u.segments);
      const UavPose& last = track.back();
      CHECK(std::fabs(last.x - u.home.x) <= 1e-9);
      CHECK(std::fabs(last.y - u.home.y) <= 1e-9);
      CHECK(std::fabs(last.z) <= 1e-9);
    }
  }
}

TEST_CASE("a long demand brings in a relief drone") {
  Scenario s = testutil::relief_scenario();
  MissionPlan plan = plan_mission(s);

  REQUIRE(plan.uavs.size() == 2);
  REQUIRE(plan.replacements.size() == 1);
  const Replacement& rep = plan.replacements[0];
  CHECK(rep.uav_index == 0);
  CHECK(rep.relief_uav_index == 1);

  const UavMission* incumbent = nullptr;
  const UavMission* relief = nullptr;
  for (const auto& u : plan.uavs)
    (u.is_relief ? relief : incumbent) = &u;
  REQUIRE(incumbent);
  REQUIRE(relief);

  CHECK(relief->relieves == incumbent->uav_index);
  CHECK(incumbent->t_light_planned < incumbent->t_light_required);

  // Handover continuity: the relief is already lighting when the
  // incumbent stops.
  CHECK(relief->arrival_s <= incumbent->light_end_s + 1e-6);
  CHECK(rep.handover_s == doctest::Approx(incumbent->light_end_s));
  CHECK(rep.uncovered_light_s >= 0.0);

  // Both serve the same spot from different homes.
  CHECK(relief->target_x == doctest::Approx(incumbent->target_x));
  CHECK(relief->target_y == doctest::Approx(incumbent->target_y));

  // Neither drone plans to land under the reserve.
  for (const auto& u : plan.uavs)
    CHECK(plan.battery_full_pct - u.energy.pct_total >=
          plan.reserve_floor_pct - 1e-9);
}

TEST_CASE("a long demand with no spare drone is infeasible") {
  Scenario s = testutil::relief_scenario();
  s.homes.pop_back();
  CHECK_THROWS_AS(plan_mission(s), NoReliefError);
}

TEST_CASE("plan serialization round trips") {
  Scenario s = testutil::sparse_scenario();
  MissionPlan plan = plan_mission(s);
  MissionPlan back = parse_plan(serialize_plan(plan));

  CHECK(back.uavs.size() == plan.uavs.size());
  CHECK(back.mission_span_s == doctest::Approx(plan.mission_span_s));
  CHECK(back.capacity_j == plan.capacity_j);
  CHECK(back.users.size() == plan.users.size());
  CHECK(back.timeline.size() == plan.timeline.size());
  for (size_t i = 0; i < plan.uavs.size(); ++i) {
    CHECK(back.uavs[i].uav_index == plan.uavs[i].uav_index);
    CHECK(back.uavs[i].target_x == doctest::Approx(plan.uavs[i].target_x).epsilon(1e-12));
    CHECK(back.uavs[i].flight.rotate_cw_deg ==
          doctest::Approx(plan.uavs[i].flight.rotate_cw_deg).epsilon(1e-12));
    CHECK(back.uavs[i].segments.size() == plan.uavs[i].segments.size());
    CHECK(back.uavs[i].energy.pct_total ==
          doctest::Approx(plan.uavs[i].energy.pct_total).epsilon(1e-12));
  }
}

TEST_CASE("planner seeds are reproducible") {
  Scenario s = testutil::dense_scenario();
  PlannerConfig cfg;
  cfg.anneal.rng_seed = 9;
  MissionPlan a = plan_mission(s, cfg);
  MissionPlan b = plan_mission(s, cfg);
  CHECK(a.uavs[0].target_x == b.uavs[0].target_x);
  CHECK(a.uavs[0].target_y == b.uavs[0].target_y);
}
