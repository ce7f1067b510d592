#pragma once

#include <vector>

#include "uavlight/scenario.hpp"
#include "uavlight/types.hpp"

namespace uavlight {

// A group of users served together by one drone.
struct Cluster {
  std::vector<int> user_indices;  // indices into Scenario::users
  BrightnessBand band;            // governing band: brightest level present
  int uav_index = -1;             // fleet slot serving this cluster
};

struct Assignment {
  std::vector<Cluster> clusters;
};

// Splits users into serviceable clusters: one cluster when a single drone
// can cover everyone, otherwise split by brightness level first and then
// spatially until every cluster fits its band. Throws FleetExhaustedError
// when that takes more clusters than there are drones.
Assignment partition_users(const Scenario& s);

}  // namespace uavlight
