#pragma once

#include <string>
#include <vector>

#include "uavlight/link.hpp"
#include "uavlight/mission.hpp"
#include "uavlight/svg.hpp"

namespace uavlight {

// Parses a flight-log file back into entries. Throws ParseError with the
// offending line number; an empty log is an error.
std::vector<LogEntry> parse_flight_log(const std::string& text);

struct DroneReport {
  int drone = 0;
  double first_reading_pct = -1.0;
  double last_reading_pct = -1.0;
  double predicted_end_pct = -1.0;  // from the plan's energy accounting
  long long takeoff_ms = -1;
  long long land_ms = -1;
  int retries = 0;
  int forced_land_events = 0;
  int motion_acks = 0;
};

struct MissionReport {
  bool completed = false;
  std::string abort_reason;
  long long span_ms = 0;
  std::vector<DroneReport> drones;
  std::vector<BatteryCurve> curves;
};

// Rebuilds per-drone battery curves and mission statistics from the log.
// Between battery readings the curve follows the propulsion/lighting model
// of what the drone was doing, rescaled so the readings are hit exactly.
MissionReport analyze_log(const std::vector<LogEntry>& entries,
                          const MissionPlan& plan);

std::string battery_csv(const std::vector<BatteryCurve>& curves);
std::string summary_text(const MissionReport& rep, const MissionPlan& plan);

}  // namespace uavlight
