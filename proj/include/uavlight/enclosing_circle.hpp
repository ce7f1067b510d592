#pragma once

#include <vector>

#include "uavlight/types.hpp"

namespace uavlight {

struct Circle {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;

  bool contains(double px, double py, double eps = 1e-9) const;
};

// Smallest circle enclosing all points. Empty input gives a zero circle.
Circle enclosing_circle(const std::vector<std::pair<double, double>>& points);

// Exact best hover point for a user set: center of their smallest
// enclosing circle, radius = worst-case horizontal distance.
Circle exact_one_center(const std::vector<UserRequest>& users);

}  // namespace uavlight
