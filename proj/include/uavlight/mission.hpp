#pragma once

#include <string>
#include <vector>

#include "uavlight/anneal.hpp"
#include "uavlight/energy.hpp"
#include "uavlight/scenario.hpp"
#include "uavlight/types.hpp"

namespace uavlight {

// Direction and distances one drone flies to reach its hover point.
// rotate_cw_deg is the clockwise bearing from the +y axis in [0, 360).
struct FlightParams {
  double rotate_cw_deg = 0.0;
  double forward_m = 0.0;
  double service_height = 0.0;
  double transit_height = 0.0;
};

FlightParams derive_flight_params(const UavPose& home, double target_x,
                                  double target_y, double service_height,
                                  double transit_height);

// Cycle summarizes the five named phases; the segments additionally carry
// the descent from transit to service height and any pre-deploy hold, so
// they are the authority for energy accounting and pose replay.
struct CycleBuild {
  ServiceCycle cycle;
  std::vector<TrajectorySegment> segments;
};

CycleBuild build_cycle(const FlightParams& fp, double takeoff_altitude,
                       double v_vertical, double v_horizontal, double t_light,
                       double pre_deploy_wait_s);

enum class StepType { deploy, hold, ret };

struct TimelineStep {
  StepType type = StepType::hold;
  double start_s = 0.0;
  double duration_s = 0.0;
  std::vector<int> uavs;  // deploy/return members, in command emit order
};

// Everything one drone does during the mission.
struct UavMission {
  int uav_index = -1;
  int cluster_index = -1;
  bool is_relief = false;
  int relieves = -1;  // uav_index of the drone this one replaces
  std::vector<int> user_indices;
  UavPose home;
  double target_x = 0.0;
  double target_y = 0.0;
  FlightParams flight;
  double t_light_required = 0.0;  // coverage the cluster asks of this drone
  double t_light_planned = 0.0;   // lighting the schedule actually gives it
  double pre_deploy_wait_s = 0.0;
  double arrival_s = 0.0;    // lighting starts
  double light_end_s = 0.0;  // return flight starts
  ServiceCycle cycle;
  std::vector<TrajectorySegment> segments;
  EnergyBreakdown energy;
  double return_reserve_pct = 0.0;  // battery level that forces heading home
  double battery_start_pct = 100.0;
};

struct Replacement {
  int uav_index = -1;         // incumbent
  int relief_uav_index = -1;  // fresh drone taking over
  double handover_s = 0.0;    // incumbent light end
  double uncovered_light_s = 0.0;  // coverage the relief could not fund
};

struct MissionPlan {
  double light_angle_deg = 30.0;
  double v_horizontal = 1.0;
  double v_vertical = 0.7;
  double takeoff_altitude = 1.0;
  double capacity_j = 15500.0;
  double mu_pct_per_s = 0.2;
  double battery_full_pct = 100.0;
  double reserve_floor_pct = 5.0;
  PropulsionParams propulsion;
  std::vector<UserRequest> users;
  std::vector<UavPose> homes;
  std::vector<UavMission> uavs;
  std::vector<Replacement> replacements;
  std::vector<TimelineStep> timeline;
  double mission_span_s = 0.0;
};

struct PlannerConfig {
  AnnealConfig anneal;
  // Overlap kept between a relief arriving and the incumbent leaving.
  double handover_margin_s = 2.0;
  // Lighting time shaved off the battery budget so the real drone still
  // lands at or above the reserve floor.
  double truncation_margin_pct = 1.0;
  // Transit height is kept at least this far above service height so the
  // final approach is a visible descent.
  double min_descend_m = 0.2;
};

MissionPlan plan_mission(const Scenario& s, const PlannerConfig& cfg = {},
                         std::vector<AnnealTrace>* traces = nullptr);

// Pose after each segment, starting from home. A complete mission ends
// back at home.
std::vector<UavPose> replay_positions(const UavPose& home,
                                      const std::vector<TrajectorySegment>& segments);

std::string serialize_plan(const MissionPlan& plan);
MissionPlan parse_plan(const std::string& json_text);
MissionPlan load_plan(const std::string& path);

}  // namespace uavlight
