#include "uavlight/mock_drone.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"
#include "uavlight/errors.hpp"
#include "uavlight/scenario.hpp"

namespace uavlight {

using nlohmann::json;

namespace {

FaultProfile profile_from_json(const json& j) {
  FaultProfile p;
  if (!j.is_object()) throw ValidationError("fault profile must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "drop_prob") {
      p.drop_prob = it.value().get<double>();
      if (p.drop_prob < 0.0 || p.drop_prob > 1.0)
        throw ValidationError("drop_prob must be in [0, 1]");
    } else if (key == "delay_ms") {
      for (auto d = it.value().begin(); d != it.value().end(); ++d)
        p.delay_ms[d.key()] = d.value().get<int>();
    } else if (key == "drop_first") {
      for (auto d = it.value().begin(); d != it.value().end(); ++d)
        p.drop_first[d.key()] = d.value().get<int>();
    } else if (key == "battery_script") {
      for (const auto& e : it.value()) {
        if (!e.is_array() || e.size() != 2)
          throw ValidationError("battery_script entries are [t_ms, pct]");
        p.battery_script.emplace_back(e.at(0).get<long long>(),
                                      e.at(1).get<double>());
      }
      std::sort(p.battery_script.begin(), p.battery_script.end());
    } else if (key == "rng_seed") {
      p.rng_seed = it.value().get<uint64_t>();
    } else {
      throw ValidationError("unknown fault profile field: " + key);
    }
  }
  return p;
}

}  // namespace

FaultProfile parse_fault_profile(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("fault profile is not valid JSON: ") + e.what());
  }
  return profile_from_json(j);
}

FaultProfile load_fault_profile(const std::string& path) {
  return parse_fault_profile(read_file(path));
}

std::map<int, FaultProfile> parse_fault_profiles(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("fault profile is not valid JSON: ") + e.what());
  }
  std::map<int, FaultProfile> out;
  if (j.is_object() && j.contains("drones")) {
    for (auto it = j.at("drones").begin(); it != j.at("drones").end(); ++it) {
      int idx = std::stoi(it.key());
      if (idx < 1) throw ValidationError("fault profile drone keys are 1-based");
      out[idx] = profile_from_json(it.value());
    }
  } else {
    out[0] = profile_from_json(j);
  }
  return out;
}

MockDrone::MockDrone(const MockConfig& cfg)
    : cfg_(cfg),
      socket_(0),
      rng_(cfg.faults.rng_seed),
      thread_() {
  validate(cfg_.propulsion);
  if (!(cfg_.time_scale > 0.0))
    throw ValidationError("time_scale must be positive");
  st_.battery_pct = cfg_.start_battery_pct;
  last_update_ = std::chrono::steady_clock::now();
  drops_left_ = cfg_.faults.drop_first;
  thread_ = std::thread([this] { serve(); });
}

MockDrone::~MockDrone() { stop(); }

void MockDrone::stop() {
  stop_.store(true);
  if (thread_.joinable()) thread_.join();
}

Endpoint MockDrone::endpoint() const {
  return make_endpoint("127.0.0.1", socket_.port());
}

MockState MockDrone::state() const {
  std::lock_guard<std::mutex> lock(mu_);
  const_cast<MockDrone*>(this)->advance_idle_locked();
  return st_;
}

void MockDrone::drain_locked(double sim_seconds, double speed, bool lit) {
  if (sim_seconds <= 0.0) return;
  double pct = propulsion_power(speed, cfg_.propulsion) * sim_seconds /
               cfg_.capacity_j * 100.0;
  if (lit) pct += cfg_.mu_pct_per_s * sim_seconds;
  st_.battery_pct = std::max(0.0, st_.battery_pct - pct);
  if (st_.battery_pct == 0.0 && st_.airborne) {
    st_.pose.z = 0.0;
    st_.airborne = false;
    st_.lighting = false;
  }
}

void MockDrone::apply_script_locked() {
  while (script_pos_ < cfg_.faults.battery_script.size() &&
         cfg_.faults.battery_script[script_pos_].first <= st_.sim_time_ms) {
    double pct = cfg_.faults.battery_script[script_pos_].second;
    st_.battery_pct = std::clamp(pct, 0.0, 100.0);
    if (st_.battery_pct == 0.0 && st_.airborne) {
      st_.pose.z = 0.0;
      st_.airborne = false;
      st_.lighting = false;
    }
    ++script_pos_;
  }
}

void MockDrone::advance_idle_locked() {
  if (in_motion_) return;
  auto now = std::chrono::steady_clock::now();
  double wall_s = std::chrono::duration<double>(now - last_update_).count();
  last_update_ = now;
  if (wall_s <= 0.0) return;
  double sim_s = wall_s * cfg_.time_scale;
  st_.sim_time_ms += static_cast<long long>(std::llround(sim_s * 1000.0));
  if (st_.airborne) drain_locked(sim_s, 0.0, st_.lighting);
  apply_script_locked();
}

void MockDrone::serve() {
  while (!stop_.load()) {
    auto dg = socket_.recv(0.1);
    if (!dg) continue;
    const std::string& cmd = dg->payload;

    std::string verb = cmd.substr(0, cmd.find(' '));
    std::string response;
    double motion_sim_s = 0.0;
    double motion_speed = 0.0;
    double dz = 0.0, dx = 0.0, dy = 0.0;
    bool lit_after = false;
    bool grounded_after = false;
    bool airborne_after = false;
    bool is_motion = false;

    {
      std::lock_guard<std::mutex> lock(mu_);
      advance_idle_locked();

      auto arg_of = [&]() -> long {
        size_t sp = cmd.find(' ');
        if (sp == std::string::npos) return -1;
        try {
          return std::stol(cmd.substr(sp + 1));
        } catch (...) {
          return -1;
        }
      };

      if (cmd == "command") {
        response = "ok";
      } else if (cmd == "sn?") {
        response = cfg_.sn;
      } else if (cmd == "battery?") {
        response = std::to_string(std::lround(st_.battery_pct));
      } else if (cmd == "takeoff") {
        if (st_.airborne) {
          // Duplicate delivery after a lost ack; already satisfied.
          response = "ok";
        } else if (st_.battery_pct <= 0.0) {
          response = "error";
        } else {
          is_motion = true;
          dz = cfg_.takeoff_altitude;
          motion_speed = cfg_.v_vertical;
          motion_sim_s = cfg_.takeoff_altitude / cfg_.v_vertical;
          airborne_after = true;
          st_.lighting = false;
          response = "ok";
        }
      } else if (cmd == "land") {
        if (!st_.airborne) {
          // Duplicate delivery after a lost ack; already satisfied.
          response = "ok";
        } else {
          is_motion = true;
          dz = -st_.pose.z;
          motion_speed = cfg_.v_vertical;
          motion_sim_s = st_.pose.z / cfg_.v_vertical;
          grounded_after = true;
          st_.lighting = false;
          response = "ok";
        }
      } else if (verb == "cw" || verb == "ccw") {
        long v = arg_of();
        if (!st_.airborne || v < 1 || v > 360) {
          response = "error";
        } else {
          double turn = verb == "cw" ? static_cast<double>(v)
                                     : -static_cast<double>(v);
          st_.heading_deg = std::fmod(st_.heading_deg + turn + 360.0, 360.0);
          response = "ok";
        }
      } else if (verb == "forward" || verb == "back" || verb == "up" ||
                 verb == "down") {
        long v = arg_of();
        if (!st_.airborne || v < 20 || v > 500) {
          response = "error";
        } else {
          double d = static_cast<double>(v) / 100.0;
          double rad = st_.heading_deg * std::numbers::pi / 180.0;
          if (verb == "forward") {
            dx = d * std::sin(rad);
            dy = d * std::cos(rad);
            motion_speed = cfg_.v_horizontal;
          } else if (verb == "back") {
            dx = -d * std::sin(rad);
            dy = -d * std::cos(rad);
            motion_speed = cfg_.v_horizontal;
          } else if (verb == "up") {
            dz = d;
            motion_speed = cfg_.v_vertical;
          } else {
            if (st_.pose.z - d < -1e-9) {
              response = "error";
            } else {
              dz = -d;
              motion_speed = cfg_.v_vertical;
              lit_after = true;
            }
          }
          if (response.empty()) {
            is_motion = true;
            motion_sim_s = d / motion_speed;
            st_.lighting = false;
            response = "ok";
          }
        }
      } else {
        response = "error";
      }
    }

    if (is_motion && response == "ok") {
      {
        std::lock_guard<std::mutex> lock(mu_);
        in_motion_ = true;
      }
      std::this_thread::sleep_for(std::chrono::duration<double>(
          motion_sim_s / cfg_.time_scale));
      std::lock_guard<std::mutex> lock(mu_);
      in_motion_ = false;
      st_.pose.x += dx;
      st_.pose.y += dy;
      st_.pose.z += dz;
      if (st_.pose.z < 0.0) st_.pose.z = 0.0;
      drain_locked(motion_sim_s, motion_speed, false);
      st_.sim_time_ms += static_cast<long long>(std::llround(motion_sim_s * 1000.0));
      last_update_ = std::chrono::steady_clock::now();
      if (airborne_after && st_.battery_pct > 0.0) st_.airborne = true;
      if (grounded_after) {
        st_.airborne = false;
        st_.pose.z = 0.0;
      }
      if (lit_after && st_.airborne) st_.lighting = true;
      apply_script_locked();
    }

    // Response faults: scripted drops first, then random loss, then delay.
    std::string fault_key = verb;
    bool drop = false;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = drops_left_.find(fault_key);
      if (it != drops_left_.end() && it->second > 0) {
        --it->second;
        drop = true;
      } else if (cfg_.faults.drop_prob > 0.0 &&
                 rng_.uniform() < cfg_.faults.drop_prob) {
        drop = true;
      }
    }
    if (drop) continue;

    auto dit = cfg_.faults.delay_ms.find(fault_key);
    if (dit != cfg_.faults.delay_ms.end() && dit->second > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(dit->second));

    socket_.send_to(response, dg->from);
  }
}

}  // namespace uavlight
