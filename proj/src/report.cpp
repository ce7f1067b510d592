#include "uavlight/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>

#include "uavlight/energy.hpp"
#include "uavlight/errors.hpp"

namespace uavlight {

namespace {

bool parse_ll(const std::string& s, long long& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string verb_of(const std::string& text) {
  size_t sp = text.find(' ');
  return sp == std::string::npos ? text : text.substr(0, sp);
}

bool is_motion_verb(const std::string& v) {
  return v == "takeoff" || v == "land" || v == "cw" || v == "ccw" ||
         v == "forward" || v == "back" || v == "up" || v == "down";
}

}  // namespace

std::vector<LogEntry> parse_flight_log(const std::string& text) {
  std::vector<LogEntry> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    auto tokens = split_ws(line);
    if (tokens.size() < 4)
      throw ParseError(lineno, "log line needs time, drone, direction, text");

    LogEntry e;
    if (!parse_ll(tokens[0], e.t_ms) || e.t_ms < 0)
      throw ParseError(lineno, "bad timestamp: " + tokens[0]);
    if (tokens[1] == "-") {
      e.drone = 0;
    } else {
      long long d = 0;
      if (!parse_ll(tokens[1], d) || d < 1)
        throw ParseError(lineno, "bad drone index: " + tokens[1]);
      e.drone = static_cast<int>(d);
    }
    if (tokens[2] == "SENT")
      e.dir = LogEntry::Dir::sent;
    else if (tokens[2] == "RECV")
      e.dir = LogEntry::Dir::recv;
    else if (tokens[2] == "EVENT")
      e.dir = LogEntry::Dir::event;
    else
      throw ParseError(lineno, "bad direction: " + tokens[2]);

    size_t last = tokens.size() - 1;
    if (tokens[last].rfind("battery=", 0) == 0) {
      long long pct = 0;
      if (!parse_ll(tokens[last].substr(8), pct))
        throw ParseError(lineno, "bad battery suffix: " + tokens[last]);
      e.battery = static_cast<double>(pct);
      --last;
      if (last < 3) throw ParseError(lineno, "log line is missing its text");
    }
    std::string body;
    for (size_t i = 3; i <= last; ++i) {
      if (i > 3) body += ' ';
      body += tokens[i];
    }
    e.text = body;
    if (!out.empty() && e.t_ms < out.back().t_ms)
      throw ParseError(lineno, "timestamps go backwards");
    out.push_back(e);
  }
  if (out.empty()) throw ParseError("log is empty");
  return out;
}

MissionReport analyze_log(const std::vector<LogEntry>& entries,
                          const MissionPlan& plan) {
  MissionReport rep;
  rep.completed = true;
  if (!entries.empty()) rep.span_ms = entries.back().t_ms;

  std::map<int, DroneReport> drones;
  for (const auto& e : entries) {
    if (e.dir == LogEntry::Dir::event) {
      if (e.text.rfind("abort:", 0) == 0) {
        rep.completed = false;
        rep.abort_reason = e.text.size() > 7 ? e.text.substr(7) : "";
      }
      if (e.drone > 0) {
        auto& d = drones[e.drone];
        d.drone = e.drone;
        if (e.text.find(", retry '") != std::string::npos) ++d.retries;
        if (e.text.find("forcing land") != std::string::npos)
          ++d.forced_land_events;
      }
      continue;
    }
    if (e.drone <= 0) continue;
    auto& d = drones[e.drone];
    d.drone = e.drone;
    if (e.dir == LogEntry::Dir::recv && e.battery >= 0.0) {
      if (d.first_reading_pct < 0.0) d.first_reading_pct = e.battery;
      d.last_reading_pct = e.battery;
    }
  }

  // Pair sends with their acknowledgments per drone to recover what each
  // drone was doing when.
  struct Pending {
    std::string verb;
    long long t_sent = 0;
  };
  struct Span {
    double t0 = 0.0, t1 = 0.0;
    double watts = 0.0;
    double mu = 0.0;  // lighting drain pct/s while this span runs
  };
  std::map<int, std::vector<Span>> spans;
  std::map<int, std::optional<Pending>> pending;
  std::map<int, bool> airborne, lit;
  std::map<int, double> idle_since;  // start of current idle hover

  double hover_w = hover_powers(plan.propulsion).total();
  auto speed_for = [&](const std::string& verb) {
    if (verb == "forward" || verb == "back") return plan.v_horizontal;
    if (verb == "up" || verb == "down" || verb == "takeoff" || verb == "land")
      return plan.v_vertical;
    return 0.0;  // cw/ccw: hover in place
  };

  auto close_idle = [&](int d, double t) {
    if (!airborne[d]) return;
    double t0 = idle_since.count(d) ? idle_since[d] : t;
    if (t > t0) {
      spans[d].push_back(
          Span{t0, t, hover_w, lit[d] ? plan.mu_pct_per_s : 0.0});
    }
  };

  for (const auto& e : entries) {
    if (e.drone <= 0) continue;
    int d = e.drone;
    double t = static_cast<double>(e.t_ms) / 1000.0;
    if (e.dir == LogEntry::Dir::sent) {
      std::string verb = verb_of(e.text);
      if (!is_motion_verb(verb)) continue;
      if (!pending[d]) {
        close_idle(d, t);
        if (verb == "takeoff") airborne[d] = true;
        lit[d] = false;
        pending[d] = Pending{verb, e.t_ms};
      } else {
        pending[d]->t_sent = std::min(pending[d]->t_sent, e.t_ms);
      }
    } else if (e.dir == LogEntry::Dir::recv) {
      if (!pending[d]) continue;
      double t0 = static_cast<double>(pending[d]->t_sent) / 1000.0;
      std::string verb = pending[d]->verb;
      pending[d].reset();
      if (e.text == "error") {
        idle_since[d] = t;
        continue;
      }
      spans[d].push_back(Span{t0, t, propulsion_power(speed_for(verb), plan.propulsion), 0.0});
      auto& dr = drones[d];
      dr.drone = d;
      ++dr.motion_acks;
      if (verb == "takeoff" && dr.takeoff_ms < 0) dr.takeoff_ms = e.t_ms;
      if (verb == "land") {
        dr.land_ms = e.t_ms;
        airborne[d] = false;
        lit[d] = false;
      }
      if (verb == "down") lit[d] = true;
      idle_since[d] = t;
    }
  }

  // Battery curves: readings anchored, model-shaped in between.
  for (auto& [d, dr] : drones) {
    std::vector<std::pair<double, double>> readings;
    for (const auto& e : entries)
      if (e.drone == d && e.dir == LogEntry::Dir::recv && e.battery >= 0.0)
        readings.emplace_back(static_cast<double>(e.t_ms) / 1000.0, e.battery);
    if (readings.empty()) continue;

    BatteryCurve curve;
    curve.drone = d;
    curve.points.push_back(readings.front());
    const auto& sp = spans[d];
    for (size_t i = 0; i + 1 < readings.size(); ++i) {
      double t0 = readings[i].first, b0 = readings[i].second;
      double t1 = readings[i + 1].first, b1 = readings[i + 1].second;
      if (t1 <= t0) {
        curve.points.emplace_back(t1, b1);
        continue;
      }
      // Model drop across [t0, t1], sampled at span boundaries.
      std::vector<double> cuts;
      for (const auto& s : sp) {
        if (s.t0 > t0 && s.t0 < t1) cuts.push_back(s.t0);
        if (s.t1 > t0 && s.t1 < t1) cuts.push_back(s.t1);
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      cuts.push_back(t1);

      auto drop_over = [&](double a, double b) {
        double pct = 0.0;
        for (const auto& s : sp) {
          double lo = std::max(a, s.t0), hi = std::min(b, s.t1);
          if (hi <= lo) continue;
          pct += (s.watts * (hi - lo)) / plan.capacity_j * 100.0 +
                 s.mu * (hi - lo);
        }
        return pct;
      };

      double total_model = drop_over(t0, t1);
      double actual = b0 - b1;
      double scale = (total_model > 1e-12 && actual > 0.0)
                         ? actual / total_model
                         : 0.0;
      double cum = 0.0;
      double prev = t0;
      for (double c : cuts) {
        cum += drop_over(prev, c);
        prev = c;
        double pct = scale > 0.0
                         ? b0 - cum * scale
                         : b0 + (b1 - b0) * (c - t0) / (t1 - t0);
        if (c == t1) pct = b1;
        curve.points.emplace_back(c, pct);
      }
    }
    rep.curves.push_back(std::move(curve));
  }

  for (auto& [d, dr] : drones) {
    for (const auto& m : plan.uavs) {
      if (m.uav_index + 1 != d) continue;  // wire indices are 1-based
      dr.predicted_end_pct = m.battery_start_pct - m.energy.pct_total;
    }
    rep.drones.push_back(dr);
  }
  std::sort(rep.drones.begin(), rep.drones.end(),
            [](const DroneReport& a, const DroneReport& b) {
              return a.drone < b.drone;
            });
  std::sort(rep.curves.begin(), rep.curves.end(),
            [](const BatteryCurve& a, const BatteryCurve& b) {
              return a.drone < b.drone;
            });
  return rep;
}

std::string battery_csv(const std::vector<BatteryCurve>& curves) {
  std::ostringstream out;
  out << "t_s,drone,battery_pct\n";
  char buf[80];
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      std::snprintf(buf, sizeof(buf), "%.3f,%d,%.4f\n", p.first, c.drone,
                    p.second);
      out << buf;
    }
  }
  return out.str();
}

std::string summary_text(const MissionReport& rep, const MissionPlan& plan) {
  std::ostringstream out;
  char buf[160];
  if (rep.completed)
    out << "mission: completed\n";
  else
    out << "mission: aborted (" << rep.abort_reason << ")\n";
  std::snprintf(buf, sizeof(buf), "span: %.1f s\n",
                static_cast<double>(rep.span_ms) / 1000.0);
  out << buf;
  std::snprintf(buf, sizeof(buf), "planned span: %.1f s, drones planned: %zu\n",
                plan.mission_span_s, plan.uavs.size());
  out << buf;

  for (const auto& d : rep.drones) {
    std::snprintf(buf, sizeof(buf), "drone %d:", d.drone);
    out << buf;
    if (d.takeoff_ms >= 0) {
      std::snprintf(buf, sizeof(buf), " takeoff %.1fs",
                    static_cast<double>(d.takeoff_ms) / 1000.0);
      out << buf;
    }
    if (d.land_ms >= 0) {
      std::snprintf(buf, sizeof(buf), " landed %.1fs",
                    static_cast<double>(d.land_ms) / 1000.0);
      out << buf;
    }
    if (d.first_reading_pct >= 0.0) {
      std::snprintf(buf, sizeof(buf), " battery %.0f%% -> %.0f%%",
                    d.first_reading_pct, d.last_reading_pct);
      out << buf;
    }
    if (d.predicted_end_pct >= 0.0) {
      std::snprintf(buf, sizeof(buf), " (model end %.1f%%)",
                    d.predicted_end_pct);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), ", motions %d, retries %d", d.motion_acks,
                  d.retries);
    out << buf;
    if (d.forced_land_events > 0)
      out << ", FORCED LAND x" << d.forced_land_events;
    out << '\n';
  }

  for (const auto& r : plan.replacements) {
    std::snprintf(buf, sizeof(buf),
                  "relief: drone %d takes over from drone %d at %.1f s",
                  r.relief_uav_index + 1, r.uav_index + 1, r.handover_s);
    out << buf;
    if (r.uncovered_light_s > 1e-9) {
      std::snprintf(buf, sizeof(buf), " (%.1f s of demand unfunded)",
                    r.uncovered_light_s);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace uavlight
