#pragma once

#include <string>
#include <utility>
#include <vector>

#include "uavlight/mission.hpp"

namespace uavlight {

// Wire target meaning "all drones".
inline constexpr int kTargetAll = 0;

enum class CommandKind {
  scan,
  correct_ip,
  sn_map,
  battery_query,
  takeoff,
  land,
  cw,
  forward,
  back,
  down,
  up,
  sync,
  battery_check,
};

const char* command_kind_name(CommandKind k);

struct Command {
  CommandKind kind = CommandKind::scan;
  int target = kTargetAll;  // 1-based drone index, or kTargetAll
  long value = 0;           // scan count, degrees, centimeters or percent
  double seconds = 0.0;     // sync only
  std::vector<std::pair<int, std::string>> sn_map;  // sn_map only
};

void validate_command(const Command& cmd, int scan_n);
std::string command_line(const Command& cmd);

// A parsed or compiled mission script: fixed five-command preamble
// (scan, correct_ip, serial map, battery poll, takeoff) then the body.
struct FlightText {
  std::vector<Command> preamble;
  std::vector<Command> body;

  int scan_count() const;
  std::vector<Command> all() const;
};

// Cuts a motion into wire-legal pieces of 20..500 cm that sum exactly to
// total_cm. Returns an empty list when the motion is too short to fly.
std::vector<long> split_motion_cm(long total_cm);

FlightText compile_plan(const MissionPlan& plan,
                        const std::vector<std::string>& sn_codes,
                        std::vector<std::string>* warnings = nullptr);

FlightText parse_flight_text(const std::string& text);
std::string serialize_flight_text(const FlightText& text);

}  // namespace uavlight
