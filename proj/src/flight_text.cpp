#include "uavlight/flight_text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "uavlight/errors.hpp"

namespace uavlight {

const char* command_kind_name(CommandKind k) {
  switch (k) {
    case CommandKind::scan: return "scan";
    case CommandKind::correct_ip: return "correct_ip";
    case CommandKind::sn_map: return "sn_map";
    case CommandKind::battery_query: return "battery?";
    case CommandKind::takeoff: return "takeoff";
    case CommandKind::land: return "land";
    case CommandKind::cw: return "cw";
    case CommandKind::forward: return "forward";
    case CommandKind::back: return "back";
    case CommandKind::down: return "down";
    case CommandKind::up: return "up";
    case CommandKind::sync: return "sync";
    case CommandKind::battery_check: return "battery_check";
  }
  return "?";
}

namespace {

bool is_serial(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c))) return false;
  return true;
}

void check_target_indexed(const Command& cmd, int scan_n) {
  if (cmd.target == kTargetAll)
    throw ValidationError(std::string(command_kind_name(cmd.kind)) +
                          " needs a drone index");
  if (cmd.target < 1 || cmd.target > scan_n)
    throw ValidationError("drone index " + std::to_string(cmd.target) +
                          " outside scan range 1.." + std::to_string(scan_n));
}

std::string fmt_seconds(double s) {
  long long r = std::llround(s);
  if (std::fabs(s - static_cast<double>(r)) < 1e-9) return std::to_string(r);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", s);
  return buf;
}

}  // namespace

void validate_command(const Command& cmd, int scan_n) {
  switch (cmd.kind) {
    case CommandKind::scan:
      if (cmd.value < 1) throw ValidationError("scan count must be at least 1");
      break;
    case CommandKind::correct_ip:
      break;
    case CommandKind::sn_map: {
      if (cmd.sn_map.empty())
        throw ValidationError("serial map must not be empty");
      std::set<int> seen;
      std::set<std::string> codes;
      for (const auto& [idx, sn] : cmd.sn_map) {
        if (idx < 1 || idx > scan_n)
          throw ValidationError("serial map index " + std::to_string(idx) +
                                " outside scan range");
        if (!seen.insert(idx).second)
          throw ValidationError("duplicate index in serial map");
        if (!is_serial(sn))
          throw ValidationError("serial numbers must be alphanumeric");
        if (!codes.insert(sn).second)
          throw ValidationError("duplicate serial number in map");
      }
      break;
    }
    case CommandKind::battery_query:
    case CommandKind::land:
      if (cmd.target != kTargetAll) check_target_indexed(cmd, scan_n);
      break;
    case CommandKind::takeoff:
      if (cmd.target != kTargetAll)
        throw ValidationError("takeoff addresses all drones");
      break;
    case CommandKind::cw:
      check_target_indexed(cmd, scan_n);
      if (cmd.value < 1 || cmd.value > 360)
        throw ValidationError("cw degrees must be in 1..360");
      break;
    case CommandKind::forward:
    case CommandKind::back:
    case CommandKind::down:
    case CommandKind::up:
      check_target_indexed(cmd, scan_n);
      if (cmd.value < 20 || cmd.value > 500)
        throw ValidationError(std::string(command_kind_name(cmd.kind)) +
                              " centimeters must be in 20..500");
      break;
    case CommandKind::sync:
      if (!(cmd.seconds > 0.0) || !std::isfinite(cmd.seconds))
        throw ValidationError("sync seconds must be positive");
      break;
    case CommandKind::battery_check:
      if (cmd.value < 1 || cmd.value > 100)
        throw ValidationError("battery_check percent must be in 1..100");
      break;
  }
}

std::string command_line(const Command& cmd) {
  std::ostringstream out;
  switch (cmd.kind) {
    case CommandKind::scan:
      out << "scan " << cmd.value;
      break;
    case CommandKind::correct_ip:
      out << "correct_ip";
      break;
    case CommandKind::sn_map:
      for (size_t i = 0; i < cmd.sn_map.size(); ++i) {
        if (i) out << ',';
        out << cmd.sn_map[i].first << '=' << cmd.sn_map[i].second;
      }
      break;
    case CommandKind::battery_query:
      if (cmd.target == kTargetAll)
        out << "*>battery?";
      else
        out << cmd.target << ">battery?";
      break;
    case CommandKind::takeoff:
      out << "*>takeoff";
      break;
    case CommandKind::land:
      if (cmd.target == kTargetAll)
        out << "*>land";
      else
        out << cmd.target << ">land";
      break;
    case CommandKind::cw:
    case CommandKind::forward:
    case CommandKind::back:
    case CommandKind::down:
    case CommandKind::up:
      out << cmd.target << '>' << command_kind_name(cmd.kind) << ' '
          << cmd.value;
      break;
    case CommandKind::sync:
      out << "sync " << fmt_seconds(cmd.seconds);
      break;
    case CommandKind::battery_check:
      out << "battery_check " << cmd.value;
      break;
  }
  return out.str();
}

int FlightText::scan_count() const {
  for (const auto& c : preamble)
    if (c.kind == CommandKind::scan) return static_cast<int>(c.value);
  return 0;
}

std::vector<Command> FlightText::all() const {
  std::vector<Command> out = preamble;
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

std::vector<long> split_motion_cm(long total_cm) {
  if (total_cm < 20) return {};
  std::vector<long> pieces;
  long k = total_cm / 500;
  long r = total_cm % 500;
  if (r == 0) {
    pieces.assign(k, 500);
  } else if (r >= 20) {
    pieces.assign(k, 500);
    pieces.push_back(r);
  } else {
    // Borrow from the last full piece so the remainder stays flyable.
    pieces.assign(k - 1, 500);
    pieces.push_back(480 + r);
    pieces.push_back(20);
  }
  return pieces;
}

FlightText compile_plan(const MissionPlan& plan,
                        const std::vector<std::string>& sn_codes,
                        std::vector<std::string>* warnings) {
  int n = static_cast<int>(plan.uavs.size());
  if (n == 0) throw ValidationError("plan contains no drones");
  if (static_cast<int>(sn_codes.size()) != n)
    throw ValidationError("need exactly " + std::to_string(n) +
                          " serial numbers, got " +
                          std::to_string(sn_codes.size()));

  std::vector<const UavMission*> by_index(n, nullptr);
  for (const auto& u : plan.uavs) {
    if (u.uav_index < 0 || u.uav_index >= n || by_index[u.uav_index])
      throw ValidationError("plan drone indices must be 0.." +
                            std::to_string(n - 1) + " without repeats");
    by_index[u.uav_index] = &u;
  }

  FlightText ft;
  Command scan{CommandKind::scan, kTargetAll, n, 0.0, {}};
  Command correct{CommandKind::correct_ip, kTargetAll, 0, 0.0, {}};
  Command snmap{CommandKind::sn_map, kTargetAll, 0, 0.0, {}};
  for (int i = 0; i < n; ++i) snmap.sn_map.emplace_back(i + 1, sn_codes[i]);
  Command query{CommandKind::battery_query, kTargetAll, 0, 0.0, {}};
  Command takeoff{CommandKind::takeoff, kTargetAll, 0, 0.0, {}};
  ft.preamble = {scan, correct, snmap, query, takeoff};

  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  auto emit_motion = [&](CommandKind kind, int wire, double meters) {
    long total = std::llround(meters * 100.0);
    if (total == 0) return;
    auto pieces = split_motion_cm(total);
    if (pieces.empty()) {
      warn("drone " + std::to_string(wire) + ": " +
           command_kind_name(kind) + " " + std::to_string(total) +
           " cm is below the 20 cm minimum, dropped");
      return;
    }
    for (long cm : pieces)
      ft.body.push_back(Command{kind, wire, cm, 0.0, {}});
  };

  long floor_pct = std::llround(plan.reserve_floor_pct);
  floor_pct = std::clamp(floor_pct, 1l, 100l);
  ft.body.push_back(Command{CommandKind::battery_check, kTargetAll, floor_pct, 0.0, {}});

  for (const auto& step : plan.timeline) {
    switch (step.type) {
      case StepType::deploy:
        for (int idx : step.uavs) {
          if (idx < 0 || idx >= n || !by_index[idx])
            throw ValidationError("timeline references unknown drone");
          const UavMission& u = *by_index[idx];
          int wire = idx + 1;
          long deg = std::llround(u.flight.rotate_cw_deg) % 360;
          if (deg >= 1)
            ft.body.push_back(Command{CommandKind::cw, wire, deg, 0.0, {}});
          emit_motion(CommandKind::up, wire,
                      u.flight.transit_height - plan.takeoff_altitude);
          emit_motion(CommandKind::forward, wire, u.flight.forward_m);
          emit_motion(CommandKind::down, wire,
                      u.flight.transit_height - u.flight.service_height);
        }
        break;
      case StepType::hold:
        if (step.duration_s >= 0.01)
          ft.body.push_back(
              Command{CommandKind::sync, kTargetAll, 0, step.duration_s, {}});
        break;
      case StepType::ret:
        for (int idx : step.uavs) {
          if (idx < 0 || idx >= n || !by_index[idx])
            throw ValidationError("timeline references unknown drone");
          const UavMission& u = *by_index[idx];
          int wire = idx + 1;
          emit_motion(CommandKind::back, wire, u.flight.forward_m);
          ft.body.push_back(Command{CommandKind::land, wire, 0, 0.0, {}});
        }
        break;
    }
  }

  for (const auto& c : ft.preamble) validate_command(c, n);
  for (const auto& c : ft.body) validate_command(c, n);
  return ft;
}

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_long_strict(const std::string& s, long& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_double_strict(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

Command parse_command(const std::string& line, int lineno) {
  auto fail = [&](const std::string& msg) -> Command {
    throw ParseError(lineno, msg);
  };

  if (lower(line.substr(0, 4)) == "scan") {
    std::string rest = trim(line.substr(4));
    long n = 0;
    if (!parse_long_strict(rest, n)) return fail("scan needs a drone count");
    return Command{CommandKind::scan, kTargetAll, n, 0.0, {}};
  }
  if (lower(line) == "correct_ip")
    return Command{CommandKind::correct_ip, kTargetAll, 0, 0.0, {}};

  if (line.rfind("sync", 0) == 0 && (line.size() == 4 || line[4] == ' ')) {
    std::string rest = trim(line.substr(4));
    double sec = 0.0;
    if (!parse_double_strict(rest, sec)) return fail("sync needs seconds");
    return Command{CommandKind::sync, kTargetAll, 0, sec, {}};
  }
  if (line.rfind("battery_check", 0) == 0) {
    std::string rest = trim(line.substr(13));
    long pct = 0;
    if (!parse_long_strict(rest, pct))
      return fail("battery_check needs a percent");
    return Command{CommandKind::battery_check, kTargetAll, pct, 0.0, {}};
  }

  size_t gt = line.find('>');
  size_t eq = line.find('=');
  if (eq != std::string::npos && (gt == std::string::npos || eq < gt)) {
    Command cmd{CommandKind::sn_map, kTargetAll, 0, 0.0, {}};
    std::stringstream ss(line);
    std::string part;
    while (std::getline(ss, part, ',')) {
      part = trim(part);
      size_t p = part.find('=');
      if (p == std::string::npos) return fail("serial map entry needs index=SN");
      long idx = 0;
      if (!parse_long_strict(trim(part.substr(0, p)), idx))
        return fail("serial map entry needs a numeric index");
      std::string sn = trim(part.substr(p + 1));
      cmd.sn_map.emplace_back(static_cast<int>(idx), sn);
    }
    return cmd;
  }

  if (gt == std::string::npos) return fail("unrecognized command");

  std::string tgt = trim(line.substr(0, gt));
  std::string rest = trim(line.substr(gt + 1));
  int target = kTargetAll;
  if (tgt != "*") {
    long idx = 0;
    if (!parse_long_strict(tgt, idx) || idx < 1)
      return fail("drone index must be * or a positive integer");
    target = static_cast<int>(idx);
  }

  if (rest == "battery?")
    return Command{CommandKind::battery_query, target, 0, 0.0, {}};
  if (rest == "takeoff") return Command{CommandKind::takeoff, target, 0, 0.0, {}};
  if (rest == "land") return Command{CommandKind::land, target, 0, 0.0, {}};

  size_t sp = rest.find(' ');
  if (sp == std::string::npos) return fail("unrecognized drone command: " + rest);
  std::string verb = rest.substr(0, sp);
  std::string arg = trim(rest.substr(sp + 1));
  long v = 0;
  if (!parse_long_strict(arg, v))
    return fail(verb + " needs an integer argument");

  CommandKind kind;
  if (verb == "cw")
    kind = CommandKind::cw;
  else if (verb == "forward")
    kind = CommandKind::forward;
  else if (verb == "back")
    kind = CommandKind::back;
  else if (verb == "down")
    kind = CommandKind::down;
  else if (verb == "up")
    kind = CommandKind::up;
  else
    return fail("unrecognized drone command: " + verb);
  return Command{kind, target, v, 0.0, {}};
}

}  // namespace

FlightText parse_flight_text(const std::string& text) {
  std::vector<std::pair<Command, int>> cmds;
  int lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string line = nl == std::string::npos ? text.substr(pos)
                                               : text.substr(pos, nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    cmds.emplace_back(parse_command(line, lineno), lineno);
  }

  if (cmds.size() < 5)
    throw ParseError(cmds.empty() ? 1 : cmds.back().second,
                     "script is missing its preamble");

  auto expect = [&](size_t i, CommandKind kind, const char* what) {
    if (cmds[i].first.kind != kind)
      throw ParseError(cmds[i].second,
                       std::string("preamble must be scan, correct_ip, serial "
                                   "map, *>battery?, *>takeoff; found ") +
                           what + " out of place");
  };
  expect(0, CommandKind::scan, command_kind_name(cmds[0].first.kind));
  expect(1, CommandKind::correct_ip, command_kind_name(cmds[1].first.kind));
  expect(2, CommandKind::sn_map, command_kind_name(cmds[2].first.kind));
  expect(3, CommandKind::battery_query, command_kind_name(cmds[3].first.kind));
  if (cmds[3].first.target != kTargetAll)
    throw ParseError(cmds[3].second, "preamble battery poll must address *");
  expect(4, CommandKind::takeoff, command_kind_name(cmds[4].first.kind));

  FlightText ft;
  int scan_n = static_cast<int>(cmds[0].first.value);
  for (size_t i = 0; i < cmds.size(); ++i) {
    const auto& [cmd, line] = cmds[i];
    if (i >= 5) {
      if (cmd.kind == CommandKind::scan || cmd.kind == CommandKind::correct_ip ||
          cmd.kind == CommandKind::sn_map || cmd.kind == CommandKind::takeoff)
        throw ParseError(line, std::string(command_kind_name(cmd.kind)) +
                                   " is only allowed in the preamble");
    }
    try {
      validate_command(cmd, scan_n);
    } catch (const ValidationError& e) {
      throw ParseError(line, e.what());
    }
    (i < 5 ? ft.preamble : ft.body).push_back(cmd);
  }
  return ft;
}

std::string serialize_flight_text(const FlightText& text) {
  std::ostringstream out;
  for (const auto& c : text.preamble) out << command_line(c) << '\n';
  for (const auto& c : text.body) out << command_line(c) << '\n';
  return out.str();
}

}  // namespace uavlight
