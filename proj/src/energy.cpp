#include "uavlight/energy.hpp"

#include <cmath>

#include "uavlight/errors.hpp"

namespace uavlight {

void validate(const PropulsionParams& p) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError(std::string(name) + " must be positive");
  };
  positive(p.profile_drag, "profile_drag");
  positive(p.air_density, "air_density");
  positive(p.rotor_solidity, "rotor_solidity");
  positive(p.disk_area, "disk_area");
  positive(p.blade_omega, "blade_omega");
  positive(p.rotor_radius, "rotor_radius");
  positive(p.weight, "weight");
  positive(p.tip_speed, "tip_speed");
  positive(p.induced_hover_speed, "induced_hover_speed");
  positive(p.fuselage_drag_ratio, "fuselage_drag_ratio");
  if (!(p.induced_correction >= 0.0))
    throw ValidationError("induced_correction must be non-negative");

  double expected_tip = p.blade_omega * p.rotor_radius;
  if (std::fabs(p.tip_speed - expected_tip) > 1e-6 * expected_tip)
    throw ValidationError("tip_speed must equal blade_omega * rotor_radius");
}

HoverPowers hover_powers(const PropulsionParams& p) {
  HoverPowers hp;
  hp.blade = (p.profile_drag / 8.0) * p.air_density * p.rotor_solidity *
             p.disk_area * p.blade_omega * p.blade_omega * p.blade_omega *
             p.rotor_radius * p.rotor_radius * p.rotor_radius;
  hp.induced = (1.0 + p.induced_correction) * std::pow(p.weight, 1.5) /
               std::sqrt(2.0 * p.air_density * p.disk_area);
  return hp;
}

double propulsion_power(double v, const PropulsionParams& p) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw ValidationError("speed must be non-negative");
  HoverPowers hp = hover_powers(p);
  if (v == 0.0) return hp.total();

  double v2 = v * v;
  double blade = hp.blade * (1.0 + 3.0 * v2 / (p.tip_speed * p.tip_speed));
  double v0 = p.induced_hover_speed;
  double v04 = v0 * v0 * v0 * v0;
  double induced =
      hp.induced *
      std::sqrt(std::sqrt(1.0 + v2 * v2 / (4.0 * v04)) - v2 / (2.0 * v0 * v0));
  double parasite = 0.5 * p.fuselage_drag_ratio * p.air_density *
                    p.rotor_solidity * p.disk_area * v2;
  return blade + induced + parasite;
}

double flight_energy(const std::vector<TrajectorySegment>& segments,
                     const PropulsionParams& p) {
  double e = 0.0;
  for (const auto& seg : segments) {
    validate_segment(seg);
    e += propulsion_power(seg.speed, p) * seg.duration;
  }
  return e;
}

double lighting_energy(double t_light_s, double mu_pct_per_s) {
  if (!(t_light_s >= 0.0)) throw ValidationError("t_light must be non-negative");
  if (!(mu_pct_per_s >= 0.0)) throw ValidationError("mu must be non-negative");
  return mu_pct_per_s * t_light_s;
}

EnergyBreakdown mission_energy(const std::vector<TrajectorySegment>& segments,
                               double t_light_s, const PropulsionParams& p,
                               double capacity_j, double mu_pct_per_s) {
  if (!(capacity_j > 0.0)) throw ValidationError("capacity must be positive");
  EnergyBreakdown b;
  b.e_fly_j = flight_energy(segments, p);
  b.pct_light = lighting_energy(t_light_s, mu_pct_per_s);
  b.e_light_j = b.pct_light / 100.0 * capacity_j;
  b.e_total_j = b.e_fly_j + b.e_light_j;
  b.pct_fly = b.e_fly_j / capacity_j * 100.0;
  b.pct_total = b.pct_fly + b.pct_light;
  return b;
}

Sufficiency sufficiency_check(const EnergyBreakdown& needed,
                              double battery_now_pct, double reserve_pct,
                              double t_light_s, double light_pct_per_s) {
  if (!(light_pct_per_s >= 0.0))
    throw ValidationError("light drain rate must be non-negative");

  Sufficiency r;
  double fixed_pct = std::max(0.0, needed.pct_total - light_pct_per_s * t_light_s);
  double available = battery_now_pct - reserve_pct;

  if (available < fixed_pct) {
    r.sufficient = false;
    r.serviceable_light_s = 0.0;
    return r;
  }
  if (light_pct_per_s == 0.0) {
    r.sufficient = needed.pct_total <= available;
    r.serviceable_light_s = t_light_s;
    return r;
  }
  r.serviceable_light_s = (available - fixed_pct) / light_pct_per_s;
  r.sufficient = r.serviceable_light_s + 1e-12 >= t_light_s;
  return r;
}

}  // namespace uavlight
