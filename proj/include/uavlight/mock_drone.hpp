#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "uavlight/energy.hpp"
#include "uavlight/rng.hpp"
#include "uavlight/types.hpp"
#include "uavlight/udp.hpp"

namespace uavlight {

// Fault injection knobs for a simulated drone.
struct FaultProfile {
  double drop_prob = 0.0;  // chance of losing any response
  std::map<std::string, int> delay_ms;    // extra response delay per verb
  std::map<std::string, int> drop_first;  // swallow the first N acks per verb
  // (sim ms, battery pct) pairs applied once the clock passes each time.
  std::vector<std::pair<long long, double>> battery_script;
  uint64_t rng_seed = 1;
};

FaultProfile parse_fault_profile(const std::string& json_text);
FaultProfile load_fault_profile(const std::string& path);
// Per-drone profiles keyed by wire index; key 0 applies to every drone.
std::map<int, FaultProfile> parse_fault_profiles(const std::string& json_text);

struct MockConfig {
  std::string sn = "MOCKSN0001";
  double v_horizontal = 1.0;   // m/s
  double v_vertical = 0.7;     // m/s
  double takeoff_altitude = 1.0;
  double capacity_j = 15500.0;
  double mu_pct_per_s = 0.2;
  PropulsionParams propulsion;
  double start_battery_pct = 100.0;
  // Simulation runs this many times faster than the wall clock.
  double time_scale = 1.0;
  FaultProfile faults;
};

struct MockState {
  UavPose pose;
  double heading_deg = 0.0;
  double battery_pct = 100.0;
  bool airborne = false;
  bool lighting = false;
  long long sim_time_ms = 0;
};

// One simulated drone behind a UDP port, served by its own thread.
// Motions take their simulated duration divided by time_scale; battery
// drains with the propulsion model plus the lighting payload.
class MockDrone {
public:
  explicit MockDrone(const MockConfig& cfg);
  ~MockDrone();
  MockDrone(const MockDrone&) = delete;
  MockDrone& operator=(const MockDrone&) = delete;

  uint16_t port() const { return socket_.port(); }
  Endpoint endpoint() const;
  MockState state() const;
  void stop();

private:
  void serve();
  void advance_idle_locked();
  void apply_script_locked();
  void drain_locked(double sim_seconds, double speed, bool lit);

  MockConfig cfg_;
  UdpSocket socket_;
  mutable std::mutex mu_;
  MockState st_;
  bool in_motion_ = false;  // freezes idle accounting during a motion sleep
  std::chrono::steady_clock::time_point last_update_;
  size_t script_pos_ = 0;
  std::map<std::string, int> drops_left_;
  Rng rng_;
  std::atomic<bool> stop_{false};
  std::thread thread_;
};

}  // namespace uavlight
