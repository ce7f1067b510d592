#pragma once

#include <string>
#include <vector>

namespace uavlight {

// One ground user asking for light: planar position, brightness level
// (1 = brightest) and how many seconds of lighting they need.
struct UserRequest {
  double x = 0.0;  // m
  double y = 0.0;  // m
  int beta = 2;
  double t_user = 0.0;  // s
};

// Service altitude window for one brightness level.
struct BrightnessBand {
  int beta = 0;
  double h_min = 0.0;  // m
  double h_max = 0.0;  // m
};

struct UavPose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

enum class Phase { off, deploy, light, back, land };

const char* phase_name(Phase p);
Phase phase_from_name(const std::string& name);

// One leg of a drone trajectory. off and land move only vertically,
// deploy and back only horizontally, light is a stationary hover.
struct TrajectorySegment {
  Phase phase = Phase::off;
  double dx = 0.0;  // m
  double dy = 0.0;
  double dz = 0.0;
  double speed = 0.0;     // m/s along the leg, 0 for hover
  double duration = 0.0;  // s
};

void validate_segment(const TrajectorySegment& seg);

// Durations of the five phases of one service trip.
struct ServiceCycle {
  double t_off = 0.0;
  double t_deploy = 0.0;
  double t_light = 0.0;
  double t_back = 0.0;
  double t_land = 0.0;

  double total() const { return t_off + t_deploy + t_light + t_back + t_land; }
};

}  // namespace uavlight
