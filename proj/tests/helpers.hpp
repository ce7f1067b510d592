#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "uavlight/flight_text.hpp"
#include "uavlight/link.hpp"
#include "uavlight/mission.hpp"
#include "uavlight/mock_drone.hpp"
#include "uavlight/scenario.hpp"

namespace testutil {

using namespace uavlight;

// Five users packed around (0, 3.3), one drone at the origin. Fits a
// single lighting disk with room to spare.
inline Scenario dense_scenario() {
  Scenario s;
  s.users = {
      UserRequest{-0.5, 3.0, 2, 45.0}, UserRequest{0.4, 2.9, 2, 30.0},
      UserRequest{0.1, 3.8, 2, 45.0},  UserRequest{-0.4, 3.6, 2, 40.0},
      UserRequest{0.5, 3.4, 2, 35.0},
  };
  s.homes = {UavPose{0.0, 0.0, 0.0}};
  return s;
}

// Two brightness groups 100 m apart, two drones parked next to their
// own group.
inline Scenario sparse_scenario() {
  Scenario s;
  s.users = {
      UserRequest{-0.4, 0.0, 1, 30.0},  UserRequest{0.4, 0.0, 1, 30.0},
      UserRequest{99.6, 0.0, 2, 30.0},  UserRequest{100.4, 0.0, 2, 30.0},
  };
  s.homes = {UavPose{0.0, -2.0, 0.0}, UavPose{100.0, -2.0, 0.0}};
  return s;
}

// A demand far beyond one battery, with an idle drone available to take
// over. The oversized pack keeps hover drain slow enough that a single
// handover covers a useful stretch.
inline Scenario relief_scenario() {
  Scenario s;
  s.users = {
      UserRequest{-0.5, 3.0, 2, 600.0},
      UserRequest{0.5, 3.0, 2, 600.0},
      UserRequest{0.0, 3.6, 2, 600.0},
  };
  s.homes = {UavPose{0.0, 0.0, 0.0}, UavPose{-2.0, 0.0, 0.0}};
  s.capacity_j = 155000.0;
  return s;
}

// Two small clusters 60 m apart with a short lighting demand; used by
// the fault-injection runs where retry waits eat into the battery.
inline Scenario fault_scenario() {
  Scenario s;
  s.users = {
      UserRequest{-0.4, 2.0, 2, 20.0}, UserRequest{0.4, 2.0, 2, 20.0},
      UserRequest{59.6, 2.0, 2, 20.0}, UserRequest{60.4, 2.0, 2, 20.0},
  };
  s.homes = {UavPose{0.0, 0.0, 0.0}, UavPose{60.0, 0.0, 0.0}};
  return s;
}

inline MockConfig mock_config(const Scenario& s, const std::string& sn,
                              double time_scale,
                              const FaultProfile& faults = {}) {
  MockConfig cfg;
  cfg.sn = sn;
  cfg.v_horizontal = s.speed_horizontal;
  cfg.v_vertical = s.speed_vertical;
  cfg.takeoff_altitude = s.takeoff_altitude;
  cfg.capacity_j = s.capacity_j;
  cfg.mu_pct_per_s = s.mu_pct_per_s;
  cfg.propulsion = s.propulsion;
  cfg.start_battery_pct = 100.0;
  cfg.time_scale = time_scale;
  cfg.faults = faults;
  return cfg;
}

struct SimRun {
  MissionPlan plan;
  FlightText text;
  ExecuteResult result;
  std::vector<MockState> final_states;  // indexed by wire index - 1
};

inline std::vector<std::string> serials_for(size_t n) {
  static const char* names[] = {"ALFA1", "BRAVO2", "CHARLIE3", "DELTA4",
                                "ECHO5", "FOXTROT6"};
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) out.push_back(names[i % 6]);
  return out;
}

// Plans the scenario, compiles it, spawns one mock per drone and runs the
// mission end to end in-process.
inline SimRun run_pipeline(const Scenario& s, uint64_t seed, double time_scale,
                           const std::map<int, FaultProfile>& faults = {},
                           RetryPolicy policy = {}) {
  SimRun run;
  PlannerConfig cfg;
  cfg.anneal.rng_seed = seed;
  run.plan = plan_mission(s, cfg);

  auto sns = serials_for(run.plan.uavs.size());
  run.text = compile_plan(run.plan, sns);

  std::vector<std::unique_ptr<MockDrone>> mocks;
  std::vector<Endpoint> candidates;
  for (size_t i = 0; i < run.plan.uavs.size(); ++i) {
    FaultProfile fp;
    auto it = faults.find(static_cast<int>(i) + 1);
    if (it != faults.end()) fp = it->second;
    mocks.push_back(
        std::make_unique<MockDrone>(mock_config(s, sns[i], time_scale, fp)));
    candidates.push_back(mocks.back()->endpoint());
  }

  policy.time_scale = time_scale;
  LinkEngine engine(policy);
  run.result = engine.run(run.text, candidates);

  for (auto& m : mocks) run.final_states.push_back(m->state());
  return run;
}

inline int count_events(const FlightLog& log, const std::string& needle) {
  int n = 0;
  for (const auto& e : log.entries)
    if (e.dir == LogEntry::Dir::event && e.text.find(needle) != std::string::npos)
      ++n;
  return n;
}

inline bool is_motion_payload(const std::string& text) {
  return text.rfind("cw ", 0) == 0 || text.rfind("ccw ", 0) == 0 ||
         text.rfind("forward ", 0) == 0 || text.rfind("back ", 0) == 0 ||
         text.rfind("up ", 0) == 0 || text.rfind("down ", 0) == 0;
}

// Motion commands a drone acknowledged, in log order, retries collapsed.
inline std::vector<std::string> acked_motions(const FlightLog& log, int drone) {
  std::vector<std::string> out;
  std::string pending;
  for (const auto& e : log.entries) {
    if (e.drone != drone) continue;
    if (e.dir == LogEntry::Dir::sent && is_motion_payload(e.text))
      pending = e.text;
    else if (e.dir == LogEntry::Dir::recv && e.text == "ok" && !pending.empty()) {
      out.push_back(pending);
      pending.clear();
    } else if (e.dir == LogEntry::Dir::recv && e.text == "error") {
      // retry keeps the same pending payload
    } else if (e.dir == LogEntry::Dir::sent) {
      pending.clear();
    }
  }
  return out;
}

// Motion commands the script addresses to a drone, deduplicated the same
// way the engine sends them.
inline std::vector<std::string> scripted_motions(const FlightText& text,
                                                 int drone) {
  std::vector<std::string> out;
  for (const auto& c : text.body) {
    if (c.target != drone) continue;
    switch (c.kind) {
      case CommandKind::cw:
      case CommandKind::forward:
      case CommandKind::back:
      case CommandKind::down:
      case CommandKind::up:
        out.push_back(command_kind_name(c.kind) + std::string(" ") +
                      std::to_string(c.value));
        break;
      default:
        break;
    }
  }
  return out;
}

// Ordering invariant: each drone's acknowledged motions equal the script's
// motions for it, in order. Forced landings may truncate the tail, so a
// non-strict check only requires a prefix.
inline bool ordering_holds(const FlightLog& log, const FlightText& text,
                           int n_drones, bool require_complete = true) {
  for (int d = 1; d <= n_drones; ++d) {
    auto acked = acked_motions(log, d);
    auto scripted = scripted_motions(text, d);
    if (acked.size() > scripted.size()) return false;
    if (require_complete && acked.size() != scripted.size()) return false;
    for (size_t i = 0; i < acked.size(); ++i)
      if (acked[i] != scripted[i]) return false;
  }
  return true;
}

}  // namespace testutil
