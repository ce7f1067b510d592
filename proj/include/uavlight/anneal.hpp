#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavlight/types.hpp"

namespace uavlight {

struct AnnealConfig {
  double t_init = 100.0;
  double t_end = 0.01;
  double cooling = 0.99;
  int inner_iters = 100;
  // Proposal scale at full temperature; <= 0 picks half the user
  // bounding-box diagonal.
  double step_scale = 0.0;
  uint64_t rng_seed = 1;
  // Start from a uniform point in the bounding box instead of the centroid.
  bool random_start = false;
};

void validate(const AnnealConfig& cfg);

// Worst-case horizontal distance from hover point (x, y) to any user.
double placement_objective(double x, double y,
                           const std::vector<UserRequest>& users);

// Accept a candidate move given the objective change, the current
// temperature and a uniform draw in [0, 1).
bool metropolis_accept(double delta_f, double temperature, double rand_u);

struct TraceEntry {
  double temperature = 0.0;
  double current_f = 0.0;
  double best_f = 0.0;
};

struct AnnealTrace {
  std::vector<TraceEntry> entries;  // one per cooling step
  double best_x = 0.0;
  double best_y = 0.0;
  double best_f = 0.0;
};

// Simulated annealing search for the hover point minimizing the
// worst-case distance to the users.
AnnealTrace anneal_placement(const std::vector<UserRequest>& users,
                             const AnnealConfig& cfg);

std::string trace_to_csv(const AnnealTrace& trace);

}  // namespace uavlight
