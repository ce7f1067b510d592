#include "uavlight/geometry.hpp"

#include <cmath>
#include <numbers>

#include "uavlight/errors.hpp"

namespace uavlight {

namespace {

double tan_of_angle(double alpha_deg) {
  if (!(alpha_deg > 0.0 && alpha_deg < 90.0))
    throw ValidationError("light cone half-angle must be in (0, 90)");
  return std::tan(alpha_deg * std::numbers::pi / 180.0);
}

}  // namespace

double horizontal_distance(double ax, double ay, double bx, double by) {
  return std::hypot(bx - ax, by - ay);
}

double horizontal_distance(const UavPose& pose, const UserRequest& user) {
  return horizontal_distance(pose.x, pose.y, user.x, user.y);
}

double max_distance(const UavPose& pose, const std::vector<UserRequest>& users) {
  if (users.empty())
    throw ValidationError("max_distance needs at least one user");
  double worst = 0.0;
  for (const auto& u : users)
    worst = std::max(worst, horizontal_distance(pose, u));
  return worst;
}

bool LightingDisk::covers(double x, double y) const {
  return horizontal_distance(center_x, center_y, x, y) <= radius + kCoverageEps;
}

LightingDisk lighting_disk(const UavPose& pose, double alpha_deg) {
  double t = tan_of_angle(alpha_deg);
  if (pose.z < 0.0) throw ValidationError("hover altitude must be non-negative");
  LightingDisk d;
  d.center_x = pose.x;
  d.center_y = pose.y;
  d.radius = pose.z * t;
  d.area = std::numbers::pi * d.radius * d.radius;
  return d;
}

double adjust_height(double alpha_deg, double d_max, const BrightnessBand& band) {
  double t = tan_of_angle(alpha_deg);
  if (d_max < 0.0) throw ValidationError("d_max must be non-negative");
  if (!(band.h_min > 0.0) || !(band.h_max > band.h_min))
    throw ValidationError("band needs 0 < h_min < h_max");

  double needed = d_max / t;
  double h = std::max(band.h_min, needed);
  if (h > band.h_max + kCoverageEps)
    throw InfeasibleError("users too spread for brightness band: need altitude " +
                          std::to_string(needed) + " > h_max " +
                          std::to_string(band.h_max));
  return std::min(h, band.h_max);
}

}  // namespace uavlight
