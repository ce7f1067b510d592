#include "uavlight/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "uavlight/errors.hpp"

namespace uavlight {

using nlohmann::json;

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::off: return "off";
    case Phase::deploy: return "deploy";
    case Phase::light: return "light";
    case Phase::back: return "back";
    case Phase::land: return "land";
  }
  return "?";
}

Phase phase_from_name(const std::string& name) {
  if (name == "off") return Phase::off;
  if (name == "deploy") return Phase::deploy;
  if (name == "light") return Phase::light;
  if (name == "back") return Phase::back;
  if (name == "land") return Phase::land;
  throw ValidationError("unknown phase name: " + name);
}

void validate_segment(const TrajectorySegment& seg) {
  if (!(seg.duration >= 0.0) || !std::isfinite(seg.duration))
    throw ValidationError("segment duration must be non-negative");
  if (!(seg.speed >= 0.0) || !std::isfinite(seg.speed))
    throw ValidationError("segment speed must be non-negative");
  if (!std::isfinite(seg.dx) || !std::isfinite(seg.dy) || !std::isfinite(seg.dz))
    throw ValidationError("segment displacement must be finite");

  switch (seg.phase) {
    case Phase::off:
    case Phase::land:
      if (seg.dx != 0.0 || seg.dy != 0.0)
        throw ValidationError(std::string(phase_name(seg.phase)) +
                              " segment may move only vertically");
      break;
    case Phase::deploy:
    case Phase::back:
      if (seg.dz != 0.0)
        throw ValidationError(std::string(phase_name(seg.phase)) +
                              " segment may move only horizontally");
      break;
    case Phase::light:
      if (seg.dx != 0.0 || seg.dy != 0.0 || seg.dz != 0.0 || seg.speed != 0.0)
        throw ValidationError("light segment must hover in place");
      break;
  }

  double len = std::sqrt(seg.dx * seg.dx + seg.dy * seg.dy + seg.dz * seg.dz);
  double travelled = seg.speed * seg.duration;
  if (std::fabs(len - travelled) > 1e-6 * std::max(1.0, len))
    throw ValidationError("segment length does not match speed * duration");
}

std::array<BrightnessBand, 3> Scenario::default_bands() {
  return {BrightnessBand{1, 1.0, 1.5}, BrightnessBand{2, 1.5, 2.2},
          BrightnessBand{3, 2.2, 3.0}};
}

const BrightnessBand& Scenario::band_for(int beta) const {
  for (const auto& b : bands)
    if (b.beta == beta) return b;
  throw ValidationError("no altitude band for brightness level " +
                        std::to_string(beta));
}

void validate(const Scenario& s) {
  if (s.users.empty()) throw ValidationError("scenario has no users");
  if (s.homes.empty()) throw ValidationError("scenario has no fleet");

  for (size_t i = 0; i < s.users.size(); ++i) {
    const auto& u = s.users[i];
    if (!std::isfinite(u.x) || !std::isfinite(u.y))
      throw ValidationError("user " + std::to_string(i) +
                            ": position must be finite");
    if (u.beta < 1 || u.beta > 3)
      throw ValidationError("user " + std::to_string(i) +
                            ": beta must be 1, 2 or 3");
    if (!(u.t_user > 0.0) || !std::isfinite(u.t_user))
      throw ValidationError("user " + std::to_string(i) +
                            ": t_user must be positive");
  }

  for (size_t i = 0; i < s.homes.size(); ++i) {
    const auto& h = s.homes[i];
    if (!std::isfinite(h.x) || !std::isfinite(h.y))
      throw ValidationError("drone " + std::to_string(i) +
                            ": home must be finite");
    if (h.z != 0.0)
      throw ValidationError("drone " + std::to_string(i) +
                            ": home must be on the ground (z = 0)");
  }

  if (!(s.light_angle_deg > 0.0 && s.light_angle_deg < 90.0))
    throw ValidationError("light_angle_deg must be in (0, 90)");

  for (int beta = 1; beta <= 3; ++beta) {
    const BrightnessBand* found = nullptr;
    for (const auto& b : s.bands)
      if (b.beta == beta) found = &b;
    if (!found)
      throw ValidationError("missing altitude band for beta " +
                            std::to_string(beta));
    if (!(found->h_min > 0.0) || !(found->h_max > found->h_min))
      throw ValidationError("band " + std::to_string(beta) +
                            ": need 0 < h_min < h_max");
  }
  for (int beta = 1; beta < 3; ++beta) {
    const auto& lo = s.band_for(beta);
    const auto& hi = s.band_for(beta + 1);
    if (lo.h_min > hi.h_min || lo.h_max > hi.h_max)
      throw ValidationError("bands must sit higher for dimmer levels");
  }

  if (!(s.battery_full_pct > 0.0 && s.battery_full_pct <= 100.0))
    throw ValidationError("battery_full_pct must be in (0, 100]");
  if (!(s.capacity_j > 0.0))
    throw ValidationError("capacity_j must be positive");
  if (!(s.mu_pct_per_s >= 0.0))
    throw ValidationError("mu_pct_per_s must be non-negative");
  if (!(s.speed_horizontal > 0.0) || !(s.speed_vertical > 0.0))
    throw ValidationError("speeds must be positive");
  if (!(s.takeoff_altitude > 0.0))
    throw ValidationError("takeoff_altitude must be positive");
  double lowest = s.band_for(1).h_min;
  if (s.takeoff_altitude > lowest + 1e-9)
    throw ValidationError("takeoff_altitude must not exceed the lowest band");
  if (!(s.reserve_floor_pct >= 0.0 && s.reserve_floor_pct <= 50.0))
    throw ValidationError("reserve_floor_pct must be in [0, 50]");

  validate(s.propulsion);
}

namespace {

[[noreturn]] void bad(const std::string& msg) { throw ValidationError(msg); }

double num(const json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing field: ") + key);
  const auto& v = j.at(key);
  if (!v.is_number()) bad(std::string(key) + " must be a number");
  return v.get<double>();
}

double num_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) bad(std::string(key) + " must be a number");
  return v.get<double>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok) bad("unknown field in " + where + ": " + it.key());
  }
}

PropulsionParams parse_propulsion(const json& j) {
  PropulsionParams p;
  reject_unknown(j,
                 {"profile_drag", "air_density", "rotor_solidity", "disk_area",
                  "blade_omega", "rotor_radius", "induced_correction", "weight",
                  "tip_speed", "induced_hover_speed", "fuselage_drag_ratio"},
                 "propulsion");
  p.profile_drag = num_or(j, "profile_drag", p.profile_drag);
  p.air_density = num_or(j, "air_density", p.air_density);
  p.rotor_solidity = num_or(j, "rotor_solidity", p.rotor_solidity);
  p.disk_area = num_or(j, "disk_area", p.disk_area);
  p.blade_omega = num_or(j, "blade_omega", p.blade_omega);
  p.rotor_radius = num_or(j, "rotor_radius", p.rotor_radius);
  p.induced_correction = num_or(j, "induced_correction", p.induced_correction);
  p.weight = num_or(j, "weight", p.weight);
  p.induced_hover_speed = num_or(j, "induced_hover_speed", p.induced_hover_speed);
  p.fuselage_drag_ratio = num_or(j, "fuselage_drag_ratio", p.fuselage_drag_ratio);
  if (j.contains("tip_speed"))
    p.tip_speed = num(j, "tip_speed");
  else
    p.tip_speed = p.blade_omega * p.rotor_radius;
  return p;
}

json propulsion_to_json(const PropulsionParams& p) {
  return json{{"profile_drag", p.profile_drag},
              {"air_density", p.air_density},
              {"rotor_solidity", p.rotor_solidity},
              {"disk_area", p.disk_area},
              {"blade_omega", p.blade_omega},
              {"rotor_radius", p.rotor_radius},
              {"induced_correction", p.induced_correction},
              {"weight", p.weight},
              {"tip_speed", p.tip_speed},
              {"induced_hover_speed", p.induced_hover_speed},
              {"fuselage_drag_ratio", p.fuselage_drag_ratio}};
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("scenario must be a JSON object");

  reject_unknown(j,
                 {"users", "fleet", "light_angle_deg", "bands",
                  "battery_full_pct", "propulsion", "capacity_j",
                  "mu_pct_per_s", "speed_horizontal", "speed_vertical",
                  "takeoff_altitude", "reserve_floor_pct"},
                 "scenario");

  Scenario s;

  if (!j.contains("users") || !j.at("users").is_array())
    bad("scenario needs a users array");
  for (const auto& ju : j.at("users")) {
    if (!ju.is_object()) bad("each user must be an object");
    reject_unknown(ju, {"x", "y", "beta", "t_user"}, "user");
    UserRequest u;
    u.x = num(ju, "x");
    u.y = num(ju, "y");
    double beta = num(ju, "beta");
    if (beta != std::floor(beta)) bad("beta must be an integer");
    u.beta = static_cast<int>(beta);
    u.t_user = num(ju, "t_user");
    s.users.push_back(u);
  }

  if (!j.contains("fleet") || !j.at("fleet").is_array())
    bad("scenario needs a fleet array");
  for (const auto& jf : j.at("fleet")) {
    if (!jf.is_object()) bad("each fleet entry must be an object");
    reject_unknown(jf, {"home"}, "fleet entry");
    if (!jf.contains("home") || !jf.at("home").is_array() ||
        jf.at("home").size() != 3)
      bad("fleet entry needs home: [x, y, z]");
    UavPose h;
    h.x = jf.at("home").at(0).get<double>();
    h.y = jf.at("home").at(1).get<double>();
    h.z = jf.at("home").at(2).get<double>();
    s.homes.push_back(h);
  }

  s.light_angle_deg = num_or(j, "light_angle_deg", s.light_angle_deg);

  if (j.contains("bands")) {
    if (!j.at("bands").is_array()) bad("bands must be an array");
    for (const auto& jb : j.at("bands")) {
      reject_unknown(jb, {"beta", "h_min", "h_max"}, "band");
      double beta = num(jb, "beta");
      if (beta != std::floor(beta) || beta < 1 || beta > 3)
        bad("band beta must be 1, 2 or 3");
      BrightnessBand b;
      b.beta = static_cast<int>(beta);
      b.h_min = num(jb, "h_min");
      b.h_max = num(jb, "h_max");
      s.bands[b.beta - 1] = b;
    }
  }

  s.battery_full_pct = num_or(j, "battery_full_pct", s.battery_full_pct);
  if (j.contains("propulsion")) {
    if (!j.at("propulsion").is_object()) bad("propulsion must be an object");
    s.propulsion = parse_propulsion(j.at("propulsion"));
  }
  s.capacity_j = num_or(j, "capacity_j", s.capacity_j);
  s.mu_pct_per_s = num_or(j, "mu_pct_per_s", s.mu_pct_per_s);
  s.speed_horizontal = num_or(j, "speed_horizontal", s.speed_horizontal);
  s.speed_vertical = num_or(j, "speed_vertical", s.speed_vertical);
  s.takeoff_altitude = num_or(j, "takeoff_altitude", s.takeoff_altitude);
  s.reserve_floor_pct = num_or(j, "reserve_floor_pct", s.reserve_floor_pct);

  validate(s);
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  json j;
  json users = json::array();
  for (const auto& u : s.users)
    users.push_back(
        {{"x", u.x}, {"y", u.y}, {"beta", u.beta}, {"t_user", u.t_user}});
  j["users"] = users;

  json fleet = json::array();
  for (const auto& h : s.homes)
    fleet.push_back({{"home", {h.x, h.y, h.z}}});
  j["fleet"] = fleet;

  j["light_angle_deg"] = s.light_angle_deg;
  json bands = json::array();
  for (const auto& b : s.bands)
    bands.push_back({{"beta", b.beta}, {"h_min", b.h_min}, {"h_max", b.h_max}});
  j["bands"] = bands;
  j["battery_full_pct"] = s.battery_full_pct;
  j["propulsion"] = propulsion_to_json(s.propulsion);
  j["capacity_j"] = s.capacity_j;
  j["mu_pct_per_s"] = s.mu_pct_per_s;
  j["speed_horizontal"] = s.speed_horizontal;
  j["speed_vertical"] = s.speed_vertical;
  j["takeoff_altitude"] = s.takeoff_altitude;
  j["reserve_floor_pct"] = s.reserve_floor_pct;

  return j.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
  return parse_scenario(read_file(path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("cannot write " + path);
}

}  // namespace uavlight
