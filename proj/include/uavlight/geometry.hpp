#pragma once

#include <vector>

#include "uavlight/types.hpp"

namespace uavlight {

// Slack applied to coverage comparisons so ties count as covered.
inline constexpr double kCoverageEps = 1e-9;

double horizontal_distance(double ax, double ay, double bx, double by);
double horizontal_distance(const UavPose& pose, const UserRequest& user);

// Largest horizontal distance from a hover point to any user. Users must be
// non-empty.
double max_distance(const UavPose& pose, const std::vector<UserRequest>& users);

// Ground footprint of the light cone from a hover pose.
struct LightingDisk {
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 0.0;
  double area = 0.0;

  bool covers(double x, double y) const;
};

LightingDisk lighting_disk(const UavPose& pose, double alpha_deg);

// Lowest altitude inside the band whose light cone reaches d_max. Throws
// InfeasibleError when even h_max cannot cover it.
double adjust_height(double alpha_deg, double d_max, const BrightnessBand& band);

}  // namespace uavlight
