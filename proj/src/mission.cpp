#include "uavlight/mission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "json.hpp"
#include "uavlight/enclosing_circle.hpp"
#include "uavlight/errors.hpp"
#include "uavlight/geometry.hpp"
#include "uavlight/partition.hpp"

namespace uavlight {

using nlohmann::json;

FlightParams derive_flight_params(const UavPose& home, double target_x,
                                  double target_y, double service_height,
                                  double transit_height) {
  if (!(service_height > 0.0))
    throw ValidationError("service height must be positive");
  if (transit_height < service_height)
    throw ValidationError("transit height must not be below service height");

  FlightParams fp;
  fp.service_height = service_height;
  fp.transit_height = transit_height;
  double dx = target_x - home.x;
  double dy = target_y - home.y;
  fp.forward_m = std::hypot(dx, dy);
  if (fp.forward_m > 1e-12) {
    double deg = std::atan2(dx, dy) * 180.0 / std::numbers::pi;
    fp.rotate_cw_deg = std::fmod(deg + 360.0, 360.0);
  }
  return fp;
}

CycleBuild build_cycle(const FlightParams& fp, double takeoff_altitude,
                       double v_vertical, double v_horizontal, double t_light,
                       double pre_deploy_wait_s) {
  if (!(v_vertical > 0.0) || !(v_horizontal > 0.0))
    throw ValidationError("speeds must be positive");
  if (t_light < 0.0) throw ValidationError("t_light must be non-negative");
  if (pre_deploy_wait_s < 0.0)
    throw ValidationError("pre-deploy wait must be non-negative");
  if (takeoff_altitude > fp.transit_height)
    throw ValidationError("takeoff altitude above transit height");

  CycleBuild out;
  double rad = fp.rotate_cw_deg * std::numbers::pi / 180.0;
  double ux = std::sin(rad);
  double uy = std::cos(rad);
  double descent = fp.transit_height - fp.service_height;

  auto add = [&](Phase phase, double dx, double dy, double dz, double speed,
                 double duration) {
    TrajectorySegment seg{phase, dx, dy, dz, speed, duration};
    validate_segment(seg);
    out.segments.push_back(seg);
  };

  if (pre_deploy_wait_s > 0.0) {
    add(Phase::off, 0, 0, takeoff_altitude, v_vertical,
        takeoff_altitude / v_vertical);
    add(Phase::off, 0, 0, 0, 0.0, pre_deploy_wait_s);
    if (fp.transit_height > takeoff_altitude)
      add(Phase::off, 0, 0, fp.transit_height - takeoff_altitude, v_vertical,
          (fp.transit_height - takeoff_altitude) / v_vertical);
  } else {
    add(Phase::off, 0, 0, fp.transit_height, v_vertical,
        fp.transit_height / v_vertical);
  }
  if (fp.forward_m > 0.0)
    add(Phase::deploy, fp.forward_m * ux, fp.forward_m * uy, 0, v_horizontal,
        fp.forward_m / v_horizontal);
  if (descent > 0.0)
    add(Phase::land, 0, 0, -descent, v_vertical, descent / v_vertical);
  add(Phase::light, 0, 0, 0, 0.0, t_light);
  if (fp.forward_m > 0.0)
    add(Phase::back, -fp.forward_m * ux, -fp.forward_m * uy, 0, v_horizontal,
        fp.forward_m / v_horizontal);
  add(Phase::land, 0, 0, -fp.service_height, v_vertical,
      fp.service_height / v_vertical);

  out.cycle.t_off = fp.transit_height / v_vertical;
  out.cycle.t_deploy = fp.forward_m / v_horizontal;
  out.cycle.t_light = t_light;
  out.cycle.t_back = out.cycle.t_deploy;
  out.cycle.t_land = fp.service_height / v_vertical;
  return out;
}

std::vector<UavPose> replay_positions(
    const UavPose& home, const std::vector<TrajectorySegment>& segments) {
  std::vector<UavPose> out;
  UavPose p = home;
  for (const auto& seg : segments) {
    validate_segment(seg);
    p.x += seg.dx;
    p.y += seg.dy;
    p.z += seg.dz;
    out.push_back(p);
  }
  return out;
}

namespace {

struct Draft {
  int uav_index = -1;
  int cluster_index = -1;
  bool is_relief = false;
  int relieves = -1;
  std::vector<int> user_indices;
  UavPose home;
  double tx = 0.0, ty = 0.0;
  FlightParams fp;
  double required = 0.0;  // lighting the cluster asks of this drone
  double deploy_run_s = 0.0;
  double return_run_s = 0.0;
  bool has_relief = false;
  double budget_light_s = -1.0;  // lighting its battery funds (incumbents)
  // filled by the scheduler
  double wait_s = 0.0;
  double arrival_s = 0.0;
  double light_end_s = 0.0;
  double planned_light_s = 0.0;
  double uncovered_s = 0.0;
};

double deploy_run(const FlightParams& fp, double takeoff_alt, double v_v,
                  double v_h) {
  return (fp.transit_height - takeoff_alt) / v_v + fp.forward_m / v_h +
         (fp.transit_height - fp.service_height) / v_v;
}

double return_run(const FlightParams& fp, double v_v, double v_h) {
  return fp.forward_m / v_h + fp.service_height / v_v;
}

struct SimContext {
  const Scenario* s;
  const PlannerConfig* cfg;
  double light_rate;  // battery %/s while lighting
};

double relief_serviceable(const SimContext& ctx, const Draft& d, double wait_s) {
  const Scenario& s = *ctx.s;
  CycleBuild cb = build_cycle(d.fp, s.takeoff_altitude, s.speed_vertical,
                              s.speed_horizontal, 0.0, wait_s);
  EnergyBreakdown eb = mission_energy(cb.segments, 0.0, s.propulsion,
                                      s.capacity_j, s.mu_pct_per_s);
  Sufficiency su = sufficiency_check(eb, s.battery_full_pct,
                                     s.reserve_floor_pct, 0.0, ctx.light_rate);
  double budget =
      su.serviceable_light_s - ctx.cfg->truncation_margin_pct / ctx.light_rate;
  if (budget < 0.0)
    throw InfeasibleError("relief drone " + std::to_string(d.uav_index) +
                          " cannot fund any lighting at its hover point");
  return budget;
}

// Walks mission time forward, grouping simultaneous deploys and returns
// into blocks, and fills per-drone arrival and light-end times.
void simulate(std::vector<Draft>& drafts, const SimContext& ctx,
              std::vector<TimelineStep>& timeline, double& span) {
  const Scenario& s = *ctx.s;
  const PlannerConfig& cfg = *ctx.cfg;
  timeline.clear();

  double takeoff_dur = s.takeoff_altitude / s.speed_vertical;
  double t = takeoff_dur;

  TimelineStep dep0{StepType::deploy, t, 0.0, {}};
  for (auto& d : drafts) {
    if (d.is_relief) continue;
    d.wait_s = 0.0;
    d.arrival_s = t + d.deploy_run_s;
    dep0.uavs.push_back(d.uav_index);
    dep0.duration_s = std::max(dep0.duration_s, d.deploy_run_s);
  }
  std::sort(dep0.uavs.begin(), dep0.uavs.end());
  timeline.push_back(dep0);
  t += dep0.duration_s;
  double deploy0_end = t;

  struct Event {
    double at;
    int draft_i;
  };
  std::vector<Event> rets;
  std::vector<Event> deps;

  auto draft_by_uav = [&](int uav_index) -> int {
    for (size_t i = 0; i < drafts.size(); ++i)
      if (drafts[i].uav_index == uav_index) return static_cast<int>(i);
    throw ValidationError("unknown drone index in schedule");
  };

  for (size_t i = 0; i < drafts.size(); ++i) {
    Draft& d = drafts[i];
    if (d.is_relief) continue;
    double light = d.required;
    if (d.has_relief) light = std::min(light, d.budget_light_s);
    rets.push_back({d.arrival_s + light, static_cast<int>(i)});
  }
  for (size_t i = 0; i < drafts.size(); ++i) {
    Draft& d = drafts[i];
    if (!d.is_relief) continue;
    int inc = draft_by_uav(d.relieves);
    double inc_end = 0.0;
    for (const auto& e : rets)
      if (e.draft_i == inc) inc_end = e.at;
    double at = std::max(deploy0_end,
                         inc_end - d.deploy_run_s - cfg.handover_margin_s);
    deps.push_back({at, static_cast<int>(i)});
  }

  const double tie = 1e-6;
  while (!rets.empty() || !deps.empty()) {
    double next_dep = deps.empty() ? std::numeric_limits<double>::infinity()
                                   : std::min_element(deps.begin(), deps.end(),
                                                      [](auto& a, auto& b) {
                                                        return a.at < b.at;
                                                      })
                                         ->at;
    double next_ret = rets.empty() ? std::numeric_limits<double>::infinity()
                                   : std::min_element(rets.begin(), rets.end(),
                                                      [](auto& a, auto& b) {
                                                        return a.at < b.at;
                                                      })
                                         ->at;
    double next = std::min(next_dep, next_ret);
    if (next > t + tie) {
      timeline.push_back(TimelineStep{StepType::hold, t, next - t, {}});
      t = next;
    }

    if (next_dep <= next_ret) {
      TimelineStep step{StepType::deploy, t, 0.0, {}};
      std::vector<int> due;
      for (size_t i = 0; i < deps.size(); ++i)
        if (deps[i].at <= t + tie) due.push_back(static_cast<int>(i));
      std::vector<Event> kept;
      std::vector<int> members;
      for (size_t i = 0; i < deps.size(); ++i) {
        if (std::find(due.begin(), due.end(), static_cast<int>(i)) == due.end())
          kept.push_back(deps[i]);
        else
          members.push_back(deps[i].draft_i);
      }
      deps = std::move(kept);
      std::sort(members.begin(), members.end(), [&](int a, int b) {
        return drafts[a].uav_index < drafts[b].uav_index;
      });
      for (int di : members) {
        Draft& r = drafts[di];
        r.wait_s = t - takeoff_dur;
        r.arrival_s = t + r.deploy_run_s;
        step.uavs.push_back(r.uav_index);
        step.duration_s = std::max(step.duration_s, r.deploy_run_s);
      }
      timeline.push_back(step);
      t += step.duration_s;

      for (int di : members) {
        Draft& r = drafts[di];
        int inc = draft_by_uav(r.relieves);
        Draft& d = drafts[inc];
        // Incumbent hands over once the relief has been lighting for the
        // overlap margin.
        double handover = r.arrival_s + cfg.handover_margin_s;
        for (auto& e : rets)
          if (e.draft_i == inc) e.at = std::max(e.at, r.arrival_s);
        for (auto& e : rets)
          if (e.draft_i == inc) e.at = std::min(e.at, handover);
        double coverage_end = d.arrival_s + d.required;
        double budget = relief_serviceable(ctx, r, r.wait_s);
        double end = std::min(coverage_end, r.arrival_s + budget);
        end = std::max(end, r.arrival_s);
        r.required = coverage_end - r.arrival_s;
        r.uncovered_s = coverage_end - end;
        rets.push_back({end, di});
      }
    } else {
      TimelineStep step{StepType::ret, t, 0.0, {}};
      std::vector<Event> kept;
      std::vector<int> members;
      for (const auto& e : rets) {
        if (e.at <= t + tie)
          members.push_back(e.draft_i);
        else
          kept.push_back(e);
      }
      rets = std::move(kept);
      std::sort(members.begin(), members.end(), [&](int a, int b) {
        return drafts[a].uav_index < drafts[b].uav_index;
      });
      for (int di : members) {
        Draft& d = drafts[di];
        d.light_end_s = t;
        d.planned_light_s = d.light_end_s - d.arrival_s;
        step.uavs.push_back(d.uav_index);
        step.duration_s = std::max(step.duration_s, d.return_run_s);
      }
      timeline.push_back(step);
      t += step.duration_s;
    }
  }
  span = t;
}

}  // namespace

MissionPlan plan_mission(const Scenario& s, const PlannerConfig& cfg,
                         std::vector<AnnealTrace>* traces) {
  validate(s);
  validate(cfg.anneal);
  if (!(cfg.handover_margin_s >= 0.0) || !(cfg.truncation_margin_pct >= 0.0) ||
      !(cfg.min_descend_m >= 0.0))
    throw ValidationError("planner margins must be non-negative");

  Assignment assignment = partition_users(s);
  int m = static_cast<int>(assignment.clusters.size());

  HoverPowers hp = hover_powers(s.propulsion);
  double hover_pct_per_s = hp.total() / s.capacity_j * 100.0;
  double light_rate = s.mu_pct_per_s + hover_pct_per_s;
  if (!(light_rate > 0.0))
    throw ValidationError("lighting drain rate must be positive");

  SimContext ctx{&s, &cfg, light_rate};

  std::vector<Draft> drafts;
  for (int k = 0; k < m; ++k) {
    const Cluster& cl = assignment.clusters[k];
    std::vector<UserRequest> sub;
    for (int ui : cl.user_indices) sub.push_back(s.users[ui]);

    AnnealConfig acfg = cfg.anneal;
    acfg.rng_seed = cfg.anneal.rng_seed + static_cast<uint64_t>(k);
    AnnealTrace tr = anneal_placement(sub, acfg);
    if (traces) traces->push_back(tr);

    double tx = tr.best_x, ty = tr.best_y;
    double service_h;
    try {
      service_h = adjust_height(s.light_angle_deg,
                                max_distance(UavPose{tx, ty, 0.0}, sub), cl.band);
    } catch (const InfeasibleError&) {
      // The annealed point can land a hair outside the feasible region;
      // the exact one-center point is feasible whenever the cluster is.
      Circle c = exact_one_center(sub);
      tx = c.x;
      ty = c.y;
      service_h = adjust_height(s.light_angle_deg, c.radius, cl.band);
    }
    double transit_h = std::max(cl.band.h_max, service_h + cfg.min_descend_m);

    Draft d;
    d.uav_index = cl.uav_index;
    d.cluster_index = k;
    d.user_indices = cl.user_indices;
    d.home = s.homes[cl.uav_index];
    d.tx = tx;
    d.ty = ty;
    d.fp = derive_flight_params(d.home, tx, ty, service_h, transit_h);
    for (int ui : cl.user_indices)
      d.required = std::max(d.required, s.users[ui].t_user);
    d.deploy_run_s =
        deploy_run(d.fp, s.takeoff_altitude, s.speed_vertical, s.speed_horizontal);
    d.return_run_s = return_run(d.fp, s.speed_vertical, s.speed_horizontal);
    drafts.push_back(std::move(d));
  }

  std::vector<TimelineStep> timeline;
  double span = 0.0;
  int relief_count = 0;
  for (int pass = 0; pass <= s.fleet_size() + 1; ++pass) {
    simulate(drafts, ctx, timeline, span);

    bool added = false;
    for (auto& d : drafts) {
      if (d.is_relief || d.has_relief) continue;
      double actual = d.light_end_s - d.arrival_s;
      CycleBuild cb = build_cycle(d.fp, s.takeoff_altitude, s.speed_vertical,
                                  s.speed_horizontal, actual, d.wait_s);
      EnergyBreakdown eb = mission_energy(cb.segments, actual, s.propulsion,
                                          s.capacity_j, s.mu_pct_per_s);
      Sufficiency su = sufficiency_check(eb, s.battery_full_pct,
                                         s.reserve_floor_pct, actual, light_rate);
      if (su.sufficient) continue;

      double budget =
          su.serviceable_light_s - cfg.truncation_margin_pct / light_rate;
      if (budget < 0.0)
        throw InfeasibleError(
            "drone " + std::to_string(d.uav_index) +
            " cannot reach its hover point and return on a full battery");
      int slot = m + relief_count;
      if (slot >= s.fleet_size())
        throw NoReliefError("drone " + std::to_string(d.uav_index) +
                            " needs a battery handover but every drone is in use");
      d.has_relief = true;
      d.budget_light_s = budget;

      Draft r;
      r.uav_index = slot;
      r.cluster_index = d.cluster_index;
      r.is_relief = true;
      r.relieves = d.uav_index;
      r.user_indices = d.user_indices;
      r.home = s.homes[slot];
      r.tx = d.tx;
      r.ty = d.ty;
      r.fp = derive_flight_params(r.home, d.tx, d.ty, d.fp.service_height,
                                  d.fp.transit_height);
      r.required = d.required;
      r.deploy_run_s = deploy_run(r.fp, s.takeoff_altitude, s.speed_vertical,
                                  s.speed_horizontal);
      r.return_run_s = return_run(r.fp, s.speed_vertical, s.speed_horizontal);
      drafts.push_back(std::move(r));
      ++relief_count;
      added = true;
      break;
    }
    if (!added) break;
  }

  MissionPlan plan;
  plan.light_angle_deg = s.light_angle_deg;
  plan.v_horizontal = s.speed_horizontal;
  plan.v_vertical = s.speed_vertical;
  plan.takeoff_altitude = s.takeoff_altitude;
  plan.capacity_j = s.capacity_j;
  plan.mu_pct_per_s = s.mu_pct_per_s;
  plan.battery_full_pct = s.battery_full_pct;
  plan.reserve_floor_pct = s.reserve_floor_pct;
  plan.propulsion = s.propulsion;
  plan.users = s.users;
  plan.homes = s.homes;
  plan.timeline = timeline;
  plan.mission_span_s = span;

  for (const auto& d : drafts) {
    UavMission u;
    u.uav_index = d.uav_index;
    u.cluster_index = d.cluster_index;
    u.is_relief = d.is_relief;
    u.relieves = d.relieves;
    u.user_indices = d.user_indices;
    u.home = d.home;
    u.target_x = d.tx;
    u.target_y = d.ty;
    u.flight = d.fp;
    u.t_light_required = d.required;
    u.t_light_planned = d.light_end_s - d.arrival_s;
    u.pre_deploy_wait_s = d.wait_s;
    u.arrival_s = d.arrival_s;
    u.light_end_s = d.light_end_s;
    CycleBuild cb = build_cycle(d.fp, s.takeoff_altitude, s.speed_vertical,
                                s.speed_horizontal, u.t_light_planned, d.wait_s);
    u.cycle = cb.cycle;
    u.segments = cb.segments;
    u.energy = mission_energy(u.segments, u.t_light_planned, s.propulsion,
                              s.capacity_j, s.mu_pct_per_s);
    double e_return = propulsion_power(s.speed_horizontal, s.propulsion) *
                          (d.fp.forward_m / s.speed_horizontal) +
                      propulsion_power(s.speed_vertical, s.propulsion) *
                          (d.fp.service_height / s.speed_vertical);
    u.return_reserve_pct =
        s.reserve_floor_pct + e_return / s.capacity_j * 100.0;
    u.battery_start_pct = s.battery_full_pct;

    double battery_end = s.battery_full_pct - u.energy.pct_total;
    if (battery_end < s.reserve_floor_pct - 1e-9)
      throw InfeasibleError("drone " + std::to_string(d.uav_index) +
                            " would land below the battery reserve");

    auto replay = replay_positions(u.home, u.segments);
    const UavPose& last = replay.back();
    if (std::fabs(last.x - u.home.x) > 1e-9 ||
        std::fabs(last.y - u.home.y) > 1e-9 || std::fabs(last.z) > 1e-9)
      throw ValidationError("drone trajectory does not close its loop");

    plan.uavs.push_back(std::move(u));
  }

  for (const auto& d : drafts) {
    if (!d.is_relief) continue;
    Replacement r;
    r.uav_index = d.relieves;
    r.relief_uav_index = d.uav_index;
    for (const auto& inc : drafts)
      if (inc.uav_index == d.relieves) r.handover_s = inc.light_end_s;
    r.uncovered_light_s = d.uncovered_s;
    if (d.arrival_s > r.handover_s + 1e-6)
      throw InfeasibleError("battery handover leaves a lighting gap");
    plan.replacements.push_back(r);
  }

  return plan;
}

namespace {

json pose_to_json(const UavPose& p) { return json::array({p.x, p.y, p.z}); }

UavPose pose_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3)
    throw ValidationError("pose must be [x, y, z]");
  return UavPose{j.at(0).get<double>(), j.at(1).get<double>(),
                 j.at(2).get<double>()};
}

json segment_to_json(const TrajectorySegment& seg) {
  return json{{"phase", phase_name(seg.phase)}, {"dx", seg.dx},
              {"dy", seg.dy},                   {"dz", seg.dz},
              {"speed", seg.speed},             {"duration", seg.duration}};
}

TrajectorySegment segment_from_json(const json& j) {
  TrajectorySegment seg;
  seg.phase = phase_from_name(j.at("phase").get<std::string>());
  seg.dx = j.at("dx").get<double>();
  seg.dy = j.at("dy").get<double>();
  seg.dz = j.at("dz").get<double>();
  seg.speed = j.at("speed").get<double>();
  seg.duration = j.at("duration").get<double>();
  validate_segment(seg);
  return seg;
}

const char* step_name(StepType t) {
  switch (t) {
    case StepType::deploy: return "deploy";
    case StepType::hold: return "hold";
    case StepType::ret: return "return";
  }
  return "?";
}

StepType step_from_name(const std::string& name) {
  if (name == "deploy") return StepType::deploy;
  if (name == "hold") return StepType::hold;
  if (name == "return") return StepType::ret;
  throw ValidationError("unknown timeline step type: " + name);
}

json propulsion_json(const PropulsionParams& p) {
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

PropulsionParams propulsion_from_json(const json& j) {
  PropulsionParams p;
  p.profile_drag = j.at("profile_drag").get<double>();
  p.air_density = j.at("air_density").get<double>();
  p.rotor_solidity = j.at("rotor_solidity").get<double>();
  p.disk_area = j.at("disk_area").get<double>();
  p.blade_omega = j.at("blade_omega").get<double>();
  p.rotor_radius = j.at("rotor_radius").get<double>();
  p.induced_correction = j.at("induced_correction").get<double>();
  p.weight = j.at("weight").get<double>();
  p.tip_speed = j.at("tip_speed").get<double>();
  p.induced_hover_speed = j.at("induced_hover_speed").get<double>();
  p.fuselage_drag_ratio = j.at("fuselage_drag_ratio").get<double>();
  validate(p);
  return p;
}

}  // namespace

std::string serialize_plan(const MissionPlan& plan) {
  json j;
  j["settings"] = json{{"light_angle_deg", plan.light_angle_deg},
                       {"v_horizontal", plan.v_horizontal},
                       {"v_vertical", plan.v_vertical},
                       {"takeoff_altitude", plan.takeoff_altitude},
                       {"capacity_j", plan.capacity_j},
                       {"mu_pct_per_s", plan.mu_pct_per_s},
                       {"battery_full_pct", plan.battery_full_pct},
                       {"reserve_floor_pct", plan.reserve_floor_pct},
                       {"propulsion", propulsion_json(plan.propulsion)}};

  json users = json::array();
  for (const auto& u : plan.users)
    users.push_back(
        {{"x", u.x}, {"y", u.y}, {"beta", u.beta}, {"t_user", u.t_user}});
  j["users"] = users;

  json homes = json::array();
  for (const auto& h : plan.homes) homes.push_back(pose_to_json(h));
  j["homes"] = homes;

  json uavs = json::array();
  for (const auto& u : plan.uavs) {
    json seg = json::array();
    for (const auto& sgm : u.segments) seg.push_back(segment_to_json(sgm));
    uavs.push_back(json{
        {"uav_index", u.uav_index},
        {"cluster_index", u.cluster_index},
        {"is_relief", u.is_relief},
        {"relieves", u.relieves},
        {"user_indices", u.user_indices},
        {"home", pose_to_json(u.home)},
        {"target", {u.target_x, u.target_y}},
        {"flight",
         {{"rotate_cw_deg", u.flight.rotate_cw_deg},
          {"forward_m", u.flight.forward_m},
          {"service_height", u.flight.service_height},
          {"transit_height", u.flight.transit_height}}},
        {"t_light_required", u.t_light_required},
        {"t_light_planned", u.t_light_planned},
        {"pre_deploy_wait_s", u.pre_deploy_wait_s},
        {"arrival_s", u.arrival_s},
        {"light_end_s", u.light_end_s},
        {"cycle",
         {{"t_off", u.cycle.t_off},
          {"t_deploy", u.cycle.t_deploy},
          {"t_light", u.cycle.t_light},
          {"t_back", u.cycle.t_back},
          {"t_land", u.cycle.t_land}}},
        {"segments", seg},
        {"energy",
         {{"e_fly_j", u.energy.e_fly_j},
          {"e_light_j", u.energy.e_light_j},
          {"e_total_j", u.energy.e_total_j},
          {"pct_fly", u.energy.pct_fly},
          {"pct_light", u.energy.pct_light},
          {"pct_total", u.energy.pct_total}}},
        {"return_reserve_pct", u.return_reserve_pct},
        {"battery_start_pct", u.battery_start_pct}});
  }
  j["uavs"] = uavs;

  json reps = json::array();
  for (const auto& r : plan.replacements)
    reps.push_back(json{{"uav_index", r.uav_index},
                        {"relief_uav_index", r.relief_uav_index},
                        {"handover_s", r.handover_s},
                        {"uncovered_light_s", r.uncovered_light_s}});
  j["replacements"] = reps;

  json steps = json::array();
  for (const auto& st : plan.timeline)
    steps.push_back(json{{"type", step_name(st.type)},
                         {"start_s", st.start_s},
                         {"duration_s", st.duration_s},
                         {"uavs", st.uavs}});
  j["timeline"] = steps;
  j["mission_span_s"] = plan.mission_span_s;

  return j.dump(2) + "\n";
}

MissionPlan parse_plan(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("plan is not valid JSON: ") + e.what());
  }

  try {
    MissionPlan plan;
    const json& st = j.at("settings");
    plan.light_angle_deg = st.at("light_angle_deg").get<double>();
    plan.v_horizontal = st.at("v_horizontal").get<double>();
    plan.v_vertical = st.at("v_vertical").get<double>();
    plan.takeoff_altitude = st.at("takeoff_altitude").get<double>();
    plan.capacity_j = st.at("capacity_j").get<double>();
    plan.mu_pct_per_s = st.at("mu_pct_per_s").get<double>();
    plan.battery_full_pct = st.at("battery_full_pct").get<double>();
    plan.reserve_floor_pct = st.at("reserve_floor_pct").get<double>();
    plan.propulsion = propulsion_from_json(st.at("propulsion"));

    for (const auto& ju : j.at("users")) {
      UserRequest u;
      u.x = ju.at("x").get<double>();
      u.y = ju.at("y").get<double>();
      u.beta = ju.at("beta").get<int>();
      u.t_user = ju.at("t_user").get<double>();
      plan.users.push_back(u);
    }
    for (const auto& jh : j.at("homes"))
      plan.homes.push_back(pose_from_json(jh));

    for (const auto& jd : j.at("uavs")) {
      UavMission u;
      u.uav_index = jd.at("uav_index").get<int>();
      u.cluster_index = jd.at("cluster_index").get<int>();
      u.is_relief = jd.at("is_relief").get<bool>();
      u.relieves = jd.at("relieves").get<int>();
      u.user_indices = jd.at("user_indices").get<std::vector<int>>();
      u.home = pose_from_json(jd.at("home"));
      u.target_x = jd.at("target").at(0).get<double>();
      u.target_y = jd.at("target").at(1).get<double>();
      const json& jf = jd.at("flight");
      u.flight.rotate_cw_deg = jf.at("rotate_cw_deg").get<double>();
      u.flight.forward_m = jf.at("forward_m").get<double>();
      u.flight.service_height = jf.at("service_height").get<double>();
      u.flight.transit_height = jf.at("transit_height").get<double>();
      u.t_light_required = jd.at("t_light_required").get<double>();
      u.t_light_planned = jd.at("t_light_planned").get<double>();
      u.pre_deploy_wait_s = jd.at("pre_deploy_wait_s").get<double>();
      u.arrival_s = jd.at("arrival_s").get<double>();
      u.light_end_s = jd.at("light_end_s").get<double>();
      const json& jc = jd.at("cycle");
      u.cycle.t_off = jc.at("t_off").get<double>();
      u.cycle.t_deploy = jc.at("t_deploy").get<double>();
      u.cycle.t_light = jc.at("t_light").get<double>();
      u.cycle.t_back = jc.at("t_back").get<double>();
      u.cycle.t_land = jc.at("t_land").get<double>();
      for (const auto& js : jd.at("segments"))
        u.segments.push_back(segment_from_json(js));
      const json& je = jd.at("energy");
      u.energy.e_fly_j = je.at("e_fly_j").get<double>();
      u.energy.e_light_j = je.at("e_light_j").get<double>();
      u.energy.e_total_j = je.at("e_total_j").get<double>();
      u.energy.pct_fly = je.at("pct_fly").get<double>();
      u.energy.pct_light = je.at("pct_light").get<double>();
      u.energy.pct_total = je.at("pct_total").get<double>();
      u.return_reserve_pct = jd.at("return_reserve_pct").get<double>();
      u.battery_start_pct = jd.at("battery_start_pct").get<double>();

      auto replay = replay_positions(u.home, u.segments);
      if (!replay.empty()) {
        const UavPose& last = replay.back();
        if (std::fabs(last.x - u.home.x) > 1e-6 ||
            std::fabs(last.y - u.home.y) > 1e-6 || std::fabs(last.z) > 1e-6)
          throw ValidationError("drone trajectory does not close its loop");
      }
      if (u.light_end_s + 1e-9 < u.arrival_s)
        throw ValidationError("lighting ends before it starts");
      plan.uavs.push_back(std::move(u));
    }

    for (const auto& jr : j.at("replacements")) {
      Replacement r;
      r.uav_index = jr.at("uav_index").get<int>();
      r.relief_uav_index = jr.at("relief_uav_index").get<int>();
      r.handover_s = jr.at("handover_s").get<double>();
      r.uncovered_light_s = jr.at("uncovered_light_s").get<double>();
      plan.replacements.push_back(r);
    }

    for (const auto& js : j.at("timeline")) {
      TimelineStep stp;
      stp.type = step_from_name(js.at("type").get<std::string>());
      stp.start_s = js.at("start_s").get<double>();
      stp.duration_s = js.at("duration_s").get<double>();
      stp.uavs = js.at("uavs").get<std::vector<int>>();
      plan.timeline.push_back(stp);
    }
    plan.mission_span_s = j.at("mission_span_s").get<double>();
    return plan;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("plan is missing fields: ") + e.what());
  }
}

MissionPlan load_plan(const std::string& path) {
  return parse_plan(read_file(path));
}

}  // namespace uavlight
