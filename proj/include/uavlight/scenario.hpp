#pragma once

#include <array>
#include <string>
#include <vector>

#include "uavlight/energy.hpp"
#include "uavlight/types.hpp"

namespace uavlight {

// Full problem input: who needs light, where the fleet sits, and the
// physics knobs. Everything not given in the file takes the defaults below.
struct Scenario {
  std::vector<UserRequest> users;
  std::vector<UavPose> homes;
  double light_angle_deg = 30.0;  // half-angle of the light cone
  std::array<BrightnessBand, 3> bands = default_bands();
  double battery_full_pct = 100.0;
  PropulsionParams propulsion;
  double capacity_j = 15500.0;     // usable battery energy
  double mu_pct_per_s = 0.2;       // lighting payload drain
  double speed_horizontal = 1.0;   // m/s
  double speed_vertical = 0.7;     // m/s
  double takeoff_altitude = 1.0;   // m reached by the bare takeoff command
  double reserve_floor_pct = 5.0;  // never plan below this battery level

  int fleet_size() const { return static_cast<int>(homes.size()); }
  const BrightnessBand& band_for(int beta) const;

  static std::array<BrightnessBand, 3> default_bands();
};

void validate(const Scenario& s);

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace uavlight
