#include "uavlight/link.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <thread>

#include "uavlight/errors.hpp"

namespace uavlight {

namespace {

bool parse_int_payload(const std::string& s, long& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

const char* dir_name(LogEntry::Dir d) {
  switch (d) {
    case LogEntry::Dir::sent: return "SENT";
    case LogEntry::Dir::recv: return "RECV";
    case LogEntry::Dir::event: return "EVENT";
  }
  return "?";
}

}  // namespace

std::string FlightLog::to_text() const {
  std::ostringstream out;
  for (const auto& e : entries) {
    out << e.t_ms << ' ';
    if (e.drone > 0)
      out << e.drone;
    else
      out << '-';
    out << ' ' << dir_name(e.dir) << ' ' << e.text;
    if (e.battery >= 0.0) out << " battery=" << std::llround(e.battery);
    out << '\n';
  }
  return out.str();
}

LinkEngine::LinkEngine(const RetryPolicy& policy)
    : policy_(policy), socket_(0), start_(std::chrono::steady_clock::now()) {
  if (!(policy_.time_scale > 0.0))
    throw ValidationError("time_scale must be positive");
  if (policy_.max_retries < 0)
    throw ValidationError("max_retries must be non-negative");
}

long long LinkEngine::now_ms() const {
  double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
          .count();
  return static_cast<long long>(std::llround(wall * policy_.time_scale * 1000.0));
}

void LinkEngine::log_entry(int drone, LogEntry::Dir dir, const std::string& text,
                           double battery) {
  log_.entries.push_back(LogEntry{now_ms(), drone, dir, text, battery});
}

int LinkEngine::link_by_endpoint(const std::vector<DroneLink>& links,
                                 const Endpoint& ep) const {
  for (size_t i = 0; i < links.size(); ++i)
    if (links[i].address == ep) return static_cast<int>(i);
  return -1;
}

double LinkEngine::timeout_for(CommandKind kind) const {
  switch (kind) {
    case CommandKind::takeoff:
    case CommandKind::land:
      return policy_.takeoff_land_timeout_s;
    case CommandKind::battery_query:
      return policy_.query_timeout_s;
    case CommandKind::cw:
    case CommandKind::forward:
    case CommandKind::back:
    case CommandKind::down:
    case CommandKind::up:
      return policy_.motion_timeout_s;
    default:
      return policy_.query_timeout_s;
  }
}

std::string LinkEngine::payload_for(const Command& cmd) const {
  switch (cmd.kind) {
    case CommandKind::battery_query: return "battery?";
    case CommandKind::takeoff: return "takeoff";
    case CommandKind::land: return "land";
    case CommandKind::cw: return "cw " + std::to_string(cmd.value);
    case CommandKind::forward: return "forward " + std::to_string(cmd.value);
    case CommandKind::back: return "back " + std::to_string(cmd.value);
    case CommandKind::down: return "down " + std::to_string(cmd.value);
    case CommandKind::up: return "up " + std::to_string(cmd.value);
    default:
      throw ValidationError(std::string("command has no wire form: ") +
                            command_kind_name(cmd.kind));
  }
}

std::string LinkEngine::send_await(std::vector<DroneLink>& links, int li,
                                   const std::string& payload, double timeout_s) {
  int attempts = 0;
  while (true) {
    log_entry(links[li].index, LogEntry::Dir::sent, payload);
    socket_.send_to(payload, links[li].address);
    ++attempts;
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(timeout_s));

    bool got_error = false;
    while (std::chrono::steady_clock::now() < deadline) {
      double left =
          std::chrono::duration<double>(deadline - std::chrono::steady_clock::now())
              .count();
      auto dg = socket_.recv(std::max(0.0, left));
      if (!dg) break;
      int from = link_by_endpoint(links, dg->from);
      if (from != li) {
        log_entry(from >= 0 ? links[from].index : 0, LogEntry::Dir::recv,
                  dg->payload);
        log_entry(0, LogEntry::Dir::event,
                  "stale response from " + dg->from.str() + " ignored");
        continue;
      }
      double battery = -1.0;
      long val = 0;
      if (payload == "battery?" && parse_int_payload(dg->payload, val))
        battery = static_cast<double>(val);
      log_entry(links[li].index, LogEntry::Dir::recv, dg->payload, battery);
      if (dg->payload == "error") {
        got_error = true;
        break;
      }
      return dg->payload;
    }

    if (attempts > policy_.max_retries) {
      log_entry(links[li].index, LogEntry::Dir::event,
                "no usable reply to '" + payload + "' after " +
                    std::to_string(attempts) + " attempts");
      links[li].state = LinkState::lost;
      throw Abort{"drone " +
                  (links[li].index > 0 ? std::to_string(links[li].index)
                                       : links[li].address.str()) +
                  " stopped answering '" + payload + "'"};
    }
    log_entry(links[li].index, LogEntry::Dir::event,
              std::string(got_error ? "error reply" : "timeout") + ", retry '" +
                  payload + "'");
  }
}

void LinkEngine::handle_battery_reading(std::vector<DroneLink>& links, int li,
                                        double pct) {
  links[li].last_battery = pct;
}

void LinkEngine::run_block(std::vector<DroneLink>& links,
                           std::vector<std::vector<Command>>& queues) {
  struct Slot {
    size_t next = 0;
    int attempts = 0;
    bool active = false;
    std::string payload;
    CommandKind kind = CommandKind::battery_query;
    std::chrono::steady_clock::time_point deadline;
  };
  std::vector<Slot> slots(links.size());

  auto eligible = [&](const DroneLink& link, CommandKind kind) {
    switch (kind) {
      case CommandKind::takeoff:
        return link.state == LinkState::numbered;
      case CommandKind::battery_query:
        return link.state == LinkState::numbered ||
               link.state == LinkState::airborne;
      default:
        return link.state == LinkState::airborne;
    }
  };

  auto advance = [&](int li) {
    Slot& slot = slots[li];
    auto& queue = queues[li];
    slot.active = false;
    while (slot.next < queue.size()) {
      const Command& cmd = queue[slot.next];
      if (!eligible(links[li], cmd.kind)) {
        log_entry(links[li].index, LogEntry::Dir::event,
                  "skip '" + payload_for(cmd) + "' (drone not in flight)");
        ++slot.next;
        continue;
      }
      slot.payload = payload_for(cmd);
      slot.kind = cmd.kind;
      slot.attempts = 1;
      log_entry(links[li].index, LogEntry::Dir::sent, slot.payload);
      socket_.send_to(slot.payload, links[li].address);
      slot.deadline =
          std::chrono::steady_clock::now() +
          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
              std::chrono::duration<double>(timeout_for(cmd.kind)));
      slot.active = true;
      return;
    }
  };

  auto resend_or_fail = [&](int li, bool was_error) {
    Slot& slot = slots[li];
    if (slot.attempts > policy_.max_retries) {
      log_entry(links[li].index, LogEntry::Dir::event,
                "no usable reply to '" + slot.payload + "' after " +
                    std::to_string(slot.attempts) + " attempts");
      links[li].state = LinkState::lost;
      throw Abort{"drone " + std::to_string(links[li].index) +
                  " stopped answering '" + slot.payload + "'"};
    }
    log_entry(links[li].index, LogEntry::Dir::event,
              std::string(was_error ? "error reply" : "timeout") + ", retry '" +
                  slot.payload + "'");
    ++slot.attempts;
    log_entry(links[li].index, LogEntry::Dir::sent, slot.payload);
    socket_.send_to(slot.payload, links[li].address);
    slot.deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(timeout_for(slot.kind)));
  };

  for (size_t li = 0; li < links.size(); ++li)
    if (!queues[li].empty()) advance(static_cast<int>(li));

  while (true) {
    bool any_active = false;
    auto nearest = std::chrono::steady_clock::time_point::max();
    for (const auto& slot : slots) {
      if (!slot.active) continue;
      any_active = true;
      nearest = std::min(nearest, slot.deadline);
    }
    if (!any_active) break;

    double wait =
        std::chrono::duration<double>(nearest - std::chrono::steady_clock::now())
            .count();
    auto dg = socket_.recv(std::max(0.0, wait));

    if (dg) {
      int li = link_by_endpoint(links, dg->from);
      if (li < 0 || !slots[li].active) {
        log_entry(li >= 0 ? links[li].index : 0, LogEntry::Dir::recv,
                  dg->payload);
        log_entry(0, LogEntry::Dir::event,
                  "stale response from " + dg->from.str() + " ignored");
      } else {
        Slot& slot = slots[li];
        double battery = -1.0;
        long val = 0;
        bool is_battery = slot.kind == CommandKind::battery_query &&
                          parse_int_payload(dg->payload, val);
        if (is_battery) battery = static_cast<double>(val);
        log_entry(links[li].index, LogEntry::Dir::recv, dg->payload, battery);

        if (dg->payload == "error" ||
            (slot.kind == CommandKind::battery_query && !is_battery)) {
          resend_or_fail(li, true);
        } else {
          switch (slot.kind) {
            case CommandKind::takeoff:
              links[li].state = LinkState::airborne;
              break;
            case CommandKind::land:
              links[li].state = LinkState::landed;
              break;
            case CommandKind::battery_query:
              handle_battery_reading(links, li, battery);
              if (battery_floor_pct_ > 0.0 && battery < battery_floor_pct_ &&
                  links[li].state == LinkState::airborne) {
                log_entry(links[li].index, LogEntry::Dir::event,
                          "battery " + std::to_string(std::llround(battery)) +
                              "% below floor " +
                              std::to_string(std::llround(battery_floor_pct_)) +
                              "%, forcing land");
                queues[li].resize(slot.next + 1);
                queues[li].push_back(Command{CommandKind::land, links[li].index,
                                             0, 0.0, {}});
              }
              break;
            default:
              break;
          }
          ++slot.next;
          advance(li);
        }
      }
    }

    auto now = std::chrono::steady_clock::now();
    for (size_t li = 0; li < slots.size(); ++li)
      if (slots[li].active && slots[li].deadline <= now)
        resend_or_fail(static_cast<int>(li), false);
  }
}

void LinkEngine::poll_battery(std::vector<DroneLink>& links) {
  std::vector<std::vector<Command>> queues(links.size());
  bool any = false;
  for (size_t li = 0; li < links.size(); ++li) {
    if (links[li].state != LinkState::airborne) continue;
    queues[li].push_back(
        Command{CommandKind::battery_query, links[li].index, 0, 0.0, {}});
    any = true;
  }
  if (any) run_block(links, queues);
}

void LinkEngine::land_all(std::vector<DroneLink>& links) {
  for (size_t li = 0; li < links.size(); ++li) {
    if (links[li].state != LinkState::airborne) continue;
    try {
      send_await(links, static_cast<int>(li), "land",
                 policy_.takeoff_land_timeout_s);
      links[li].state = LinkState::landed;
    } catch (const Abort&) {
      links[li].state = LinkState::lost;
      log_entry(links[li].index, LogEntry::Dir::event,
                "drone unreachable while landing");
    }
  }
}

std::vector<DroneLink> LinkEngine::discover(
    int n, const std::vector<Endpoint>& candidates) {
  if (n < 1) throw ValidationError("need at least one drone");
  if (static_cast<int>(candidates.size()) < n)
    throw LinkError("only " + std::to_string(candidates.size()) +
                    " candidate endpoints for " + std::to_string(n) + " drones");
  if (log_.entries.empty()) start_ = std::chrono::steady_clock::now();

  log_entry(0, LogEntry::Dir::event, "scan for " + std::to_string(n) +
                                         " drones across " +
                                         std::to_string(candidates.size()) +
                                         " endpoints");

  std::vector<DroneLink> found;
  std::set<Endpoint> seen;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(policy_.discovery_timeout_s));
  double interval = std::min(0.5, policy_.discovery_timeout_s / 4.0);
  auto next_probe = std::chrono::steady_clock::now();

  while (static_cast<int>(found.size()) < n) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) break;
    if (now >= next_probe) {
      for (const auto& ep : candidates) {
        if (seen.count(ep)) continue;
        log_entry(0, LogEntry::Dir::sent, "command");
        socket_.send_to("command", ep);
      }
      next_probe = now + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>(interval));
    }
    auto until = std::min(deadline, next_probe);
    double wait = std::chrono::duration<double>(until - std::chrono::steady_clock::now()).count();
    auto dg = socket_.recv(std::max(0.0, wait));
    if (!dg) continue;
    bool candidate = std::find(candidates.begin(), candidates.end(), dg->from) !=
                     candidates.end();
    log_entry(0, LogEntry::Dir::recv, dg->payload);
    if (!candidate || dg->payload != "ok" || seen.count(dg->from)) continue;
    seen.insert(dg->from);
    DroneLink link;
    link.address = dg->from;
    link.state = LinkState::discovered;
    found.push_back(link);
  }

  if (static_cast<int>(found.size()) < n) {
    log_entry(0, LogEntry::Dir::event,
              "discovery found " + std::to_string(found.size()) + " of " +
                  std::to_string(n) + " drones");
    throw LinkError("discovery found " + std::to_string(found.size()) + " of " +
                    std::to_string(n) + " drones");
  }

  std::sort(found.begin(), found.end(),
            [](const DroneLink& a, const DroneLink& b) {
              return a.address < b.address;
            });

  for (size_t li = 0; li < found.size(); ++li) {
    std::string sn;
    try {
      sn = send_await(found, static_cast<int>(li), "sn?", policy_.query_timeout_s);
    } catch (const Abort& a) {
      throw LinkError(a.reason);
    }
    found[li].sn = sn;
  }
  return found;
}

void LinkEngine::number_by_sn(
    std::vector<DroneLink>& links,
    const std::vector<std::pair<int, std::string>>& sn_map) {
  if (sn_map.size() != links.size())
    throw LinkError("serial map lists " + std::to_string(sn_map.size()) +
                    " drones but " + std::to_string(links.size()) +
                    " were discovered");
  for (const auto& [idx, sn] : sn_map) {
    bool matched = false;
    for (auto& link : links) {
      if (link.sn != sn) continue;
      if (link.index != 0)
        throw LinkError("serial " + sn + " mapped twice");
      link.index = idx;
      link.state = LinkState::numbered;
      matched = true;
      break;
    }
    if (!matched)
      throw LinkError("serial " + sn + " not among discovered drones");
  }
  for (const auto& link : links)
    if (link.index == 0)
      throw LinkError("discovered drone " + link.sn + " (" + link.address.str() +
                      ") has no index in the serial map");
  std::sort(links.begin(), links.end(),
            [](const DroneLink& a, const DroneLink& b) {
              return a.index < b.index;
            });
}

ExecuteResult LinkEngine::execute(const FlightText& text,
                                  std::vector<DroneLink>& links) {
  if (log_.entries.empty()) start_ = std::chrono::steady_clock::now();
  try {
    int n = text.scan_count();
    if (static_cast<int>(links.size()) != n)
      throw Abort{"script expects " + std::to_string(n) + " drones, have " +
                  std::to_string(links.size())};
    for (const auto& link : links)
      if (link.index < 1 || link.index > n)
        throw Abort{"links must be numbered before execution"};

    // Communication check, one drone at a time.
    log_entry(0, LogEntry::Dir::event, "correct_ip: communication check");
    for (size_t li = 0; li < links.size(); ++li) {
      std::string reply =
          send_await(links, static_cast<int>(li), "command", policy_.query_timeout_s);
      if (reply != "ok")
        throw Abort{"drone " + std::to_string(links[li].index) +
                    " failed the communication check"};
    }

    // Preflight battery gate.
    {
      std::vector<std::vector<Command>> queues(links.size());
      for (size_t li = 0; li < links.size(); ++li)
        queues[li].push_back(
            Command{CommandKind::battery_query, links[li].index, 0, 0.0, {}});
      run_block(links, queues);
      for (const auto& link : links) {
        if (link.last_battery >= policy_.launch_threshold_pct) continue;
        throw Abort{"drone " + std::to_string(link.index) + " battery " +
                    std::to_string(std::llround(link.last_battery)) +
                    "% is below the launch threshold " +
                    std::to_string(std::llround(policy_.launch_threshold_pct)) +
                    "%"};
      }
    }

    // Takeoff everyone.
    {
      std::vector<std::vector<Command>> queues(links.size());
      for (size_t li = 0; li < links.size(); ++li)
        queues[li].push_back(
            Command{CommandKind::takeoff, links[li].index, 0, 0.0, {}});
      run_block(links, queues);
    }

    // Body: contiguous per-drone commands dispatch concurrently.
    const auto& body = text.body;
    size_t i = 0;
    while (i < body.size()) {
      const Command& c = body[i];
      if (c.kind == CommandKind::sync) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "sync %.6gs", c.seconds);
        log_entry(0, LogEntry::Dir::event, buf);
        std::this_thread::sleep_for(
            std::chrono::duration<double>(c.seconds / policy_.time_scale));
        poll_battery(links);
        ++i;
        continue;
      }
      if (c.kind == CommandKind::battery_check) {
        battery_floor_pct_ = static_cast<double>(c.value);
        log_entry(0, LogEntry::Dir::event,
                  "battery floor set to " + std::to_string(c.value) + "%");
        ++i;
        continue;
      }
      if (c.target == kTargetAll) {
        std::vector<std::vector<Command>> queues(links.size());
        for (size_t li = 0; li < links.size(); ++li) {
          Command one = c;
          one.target = links[li].index;
          queues[li].push_back(one);
        }
        run_block(links, queues);
        ++i;
        continue;
      }

      std::vector<std::vector<Command>> queues(links.size());
      size_t j = i;
      while (j < body.size() && body[j].target != kTargetAll &&
             body[j].kind != CommandKind::sync &&
             body[j].kind != CommandKind::battery_check) {
        int wire = body[j].target;
        int li = -1;
        for (size_t k = 0; k < links.size(); ++k)
          if (links[k].index == wire) li = static_cast<int>(k);
        if (li < 0) throw Abort{"script addresses unknown drone " + std::to_string(wire)};
        queues[li].push_back(body[j]);
        ++j;
      }
      run_block(links, queues);
      poll_battery(links);
      i = j;
    }

    // Safety net: land anything the script left airborne.
    land_all(links);
    return ExecuteResult{log_, true, ""};
  } catch (const Abort& a) {
    log_entry(0, LogEntry::Dir::event, "abort: " + a.reason);
    land_all(links);
    return ExecuteResult{log_, false, a.reason};
  } catch (const LinkError& e) {
    log_entry(0, LogEntry::Dir::event, std::string("abort: ") + e.what());
    land_all(links);
    return ExecuteResult{log_, false, e.what()};
  }
}

ExecuteResult LinkEngine::run(const FlightText& text,
                              const std::vector<Endpoint>& candidates) {
  try {
    auto links = discover(text.scan_count(), candidates);
    const Command* snmap = nullptr;
    for (const auto& c : text.preamble)
      if (c.kind == CommandKind::sn_map) snmap = &c;
    if (!snmap) throw LinkError("script has no serial map");
    number_by_sn(links, snmap->sn_map);
    return execute(text, links);
  } catch (const LinkError& e) {
    log_entry(0, LogEntry::Dir::event, std::string("abort: ") + e.what());
    return ExecuteResult{log_, false, e.what()};
  }
}

}  // namespace uavlight
