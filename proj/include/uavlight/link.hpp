#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "uavlight/flight_text.hpp"
#include "uavlight/udp.hpp"

namespace uavlight {

struct RetryPolicy {
  double motion_timeout_s = 7.0;
  double takeoff_land_timeout_s = 10.0;
  double query_timeout_s = 3.0;
  int max_retries = 3;  // resends after the first attempt
  double discovery_timeout_s = 5.0;
  double launch_threshold_pct = 20.0;  // preflight minimum battery
  // Simulation speedup: sync holds sleep their duration divided by this;
  // per-command timeouts stay wall-clock.
  double time_scale = 1.0;
};

enum class LinkState { discovered, numbered, airborne, landed, lost };

struct DroneLink {
  int index = 0;  // wire index 1..n once numbered, 0 before
  std::string sn;
  Endpoint address;
  double last_battery = -1.0;
  LinkState state = LinkState::discovered;
};

struct LogEntry {
  enum class Dir { sent, recv, event };

  long long t_ms = 0;  // simulated milliseconds since engine start
  int drone = 0;       // wire index, 0 = system
  Dir dir = Dir::event;
  std::string text;
  double battery = -1.0;  // set on battery readings
};

struct FlightLog {
  std::vector<LogEntry> entries;

  std::string to_text() const;
};

struct ExecuteResult {
  FlightLog log;
  bool completed = false;
  std::string abort_reason;
};

// Drives a mission over text-datagram links: discovery, serial numbering,
// concurrent per-drone dispatch of command blocks, retries, battery
// watchdog. Single-threaded; one command outstanding per drone.
class LinkEngine {
public:
  explicit LinkEngine(const RetryPolicy& policy = {});

  // Probes the candidates with "command" until n distinct drones answer,
  // then reads each drone's serial number.
  std::vector<DroneLink> discover(int n, const std::vector<Endpoint>& candidates);

  // Assigns wire indices from the script's serial map.
  void number_by_sn(std::vector<DroneLink>& links,
                    const std::vector<std::pair<int, std::string>>& sn_map);

  // Runs the script against numbered links: communication check, preflight
  // battery gate, takeoff, then the body. Always returns the log, even on
  // abort.
  ExecuteResult execute(const FlightText& text, std::vector<DroneLink>& links);

  // Full mission: discovery, numbering, execute.
  ExecuteResult run(const FlightText& text, const std::vector<Endpoint>& candidates);

  const FlightLog& log() const { return log_; }

private:
  struct Abort {
    std::string reason;
  };

  long long now_ms() const;
  void log_entry(int drone, LogEntry::Dir dir, const std::string& text,
                 double battery = -1.0);
  int link_by_endpoint(const std::vector<DroneLink>& links, const Endpoint& ep) const;
  double timeout_for(CommandKind kind) const;
  std::string payload_for(const Command& cmd) const;

  // Sends one command to one drone and waits for its answer, retrying on
  // loss or an error reply. Throws Abort after max_retries resends fail.
  std::string send_await(std::vector<DroneLink>& links, int li,
                         const std::string& payload, double timeout_s);

  // Runs per-drone command queues concurrently, one in flight per drone.
  void run_block(std::vector<DroneLink>& links,
                 std::vector<std::vector<Command>>& queues);

  void poll_battery(std::vector<DroneLink>& links);
  void handle_battery_reading(std::vector<DroneLink>& links, int li, double pct);
  void land_all(std::vector<DroneLink>& links);

  RetryPolicy policy_;
  UdpSocket socket_;
  FlightLog log_;
  std::chrono::steady_clock::time_point start_;
  double battery_floor_pct_ = 0.0;  // set by battery_check
};

}  // namespace uavlight
