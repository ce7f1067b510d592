#pragma once

#include <vector>

#include "uavlight/types.hpp"

namespace uavlight {

// Rotary-wing propulsion model parameters. Defaults are the reference
// quadrotor set used throughout; tip_speed must equal blade_omega * rotor_radius.
struct PropulsionParams {
  double profile_drag = 0.012;        // blade profile drag coefficient
  double air_density = 1.225;         // kg/m^3
  double rotor_solidity = 0.05;
  double disk_area = 0.503;           // m^2
  double blade_omega = 300.0;         // rad/s
  double rotor_radius = 0.4;          // m
  double induced_correction = 0.1;    // incremental induced power factor
  double weight = 20.0;               // N
  double tip_speed = 120.0;           // m/s
  double induced_hover_speed = 4.03;  // m/s
  double fuselage_drag_ratio = 0.6;
};

void validate(const PropulsionParams& p);

// Hover power split: blade profile term and induced term, in watts.
struct HoverPowers {
  double blade = 0.0;
  double induced = 0.0;

  double total() const { return blade + induced; }
};

HoverPowers hover_powers(const PropulsionParams& p);

// Power draw in watts at horizontal speed v (m/s). v = 0 gives exactly
// the hover power.
double propulsion_power(double v, const PropulsionParams& p);

// Joules consumed flying the given legs.
double flight_energy(const std::vector<TrajectorySegment>& segments,
                     const PropulsionParams& p);

// Battery percent consumed by the lighting payload over t_light seconds.
double lighting_energy(double t_light_s, double mu_pct_per_s);

struct EnergyBreakdown {
  double e_fly_j = 0.0;
  double e_light_j = 0.0;
  double e_total_j = 0.0;
  double pct_fly = 0.0;
  double pct_light = 0.0;
  double pct_total = 0.0;
};

// Full mission cost: propulsion joules for the legs plus lighting drain,
// expressed both in joules and in percent of the given capacity.
EnergyBreakdown mission_energy(const std::vector<TrajectorySegment>& segments,
                               double t_light_s, const PropulsionParams& p,
                               double capacity_j, double mu_pct_per_s);

struct Sufficiency {
  bool sufficient = false;
  // Longest lighting duration the battery can fund after fixed flight
  // costs while keeping the reserve. Zero when even the fixed costs
  // do not fit.
  double serviceable_light_s = 0.0;
};

// Decides whether a battery level funds a mission and, when it does not,
// how much lighting time it can fund. light_pct_per_s is the combined
// drain while lighting (hover propulsion plus payload).
Sufficiency sufficiency_check(const EnergyBreakdown& needed,
                              double battery_now_pct, double reserve_pct,
                              double t_light_s, double light_pct_per_s);

}  // namespace uavlight
