#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uavlight/anneal.hpp"
#include "uavlight/errors.hpp"
#include "uavlight/flight_text.hpp"
#include "uavlight/link.hpp"
#include "uavlight/mission.hpp"
#include "uavlight/mock_drone.hpp"
#include "uavlight/report.hpp"
#include "uavlight/scenario.hpp"
#include "uavlight/svg.hpp"

namespace fs = std::filesystem;
using namespace uavlight;

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int cmd_plan(const std::string& scenario_path, const std::string& out_dir,
             uint64_t seed) {
  Scenario s = load_scenario(scenario_path);
  PlannerConfig cfg;
  cfg.anneal.rng_seed = seed;
  std::vector<AnnealTrace> traces;
  MissionPlan plan = plan_mission(s, cfg, &traces);

  fs::create_directories(out_dir);
  fs::path dir(out_dir);
  write_file((dir / "plan.json").string(), serialize_plan(plan));
  for (size_t k = 0; k < traces.size(); ++k) {
    std::string name = "trace_" + std::to_string(k + 1) + ".csv";
    write_file((dir / name).string(), trace_to_csv(traces[k]));
  }
  write_file((dir / "map2d.svg").string(), render_map_svg(plan));

  std::printf("plan written to %s: %zu drones, %zu lighting disks, span %.1f s\n",
              out_dir.c_str(), plan.uavs.size(), traces.size(),
              plan.mission_span_s);
  for (const auto& r : plan.replacements)
    std::printf("relief: drone %d replaces drone %d at %.1f s\n",
                r.relief_uav_index, r.uav_index, r.handover_s);
  return 0;
}

int cmd_compile(const std::string& plan_path, const std::string& sn_csv,
                const std::string& out_path) {
  MissionPlan plan = load_plan(plan_path);
  std::vector<std::string> sns = split_csv(sn_csv);
  std::vector<std::string> warnings;
  FlightText text = compile_plan(plan, sns, &warnings);
  for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  write_file(out_path, serialize_flight_text(text));
  std::printf("flight text written to %s: %zu commands\n", out_path.c_str(),
              text.preamble.size() + text.body.size());
  return 0;
}

int cmd_fly(const std::string& text_path, int mock_n,
            const std::string& faults_path, const std::string& endpoints_csv,
            const std::string& physics_path, double time_scale,
            const std::string& out_path) {
  FlightText text = parse_flight_text(read_file(text_path));

  std::map<int, FaultProfile> profiles;
  if (!faults_path.empty())
    profiles = parse_fault_profiles(read_file(faults_path));

  MockConfig base;
  if (!physics_path.empty()) {
    Scenario s = load_scenario(physics_path);
    base.v_horizontal = s.speed_horizontal;
    base.v_vertical = s.speed_vertical;
    base.takeoff_altitude = s.takeoff_altitude;
    base.capacity_j = s.capacity_j;
    base.mu_pct_per_s = s.mu_pct_per_s;
    base.propulsion = s.propulsion;
    base.start_battery_pct = s.battery_full_pct;
  }
  base.time_scale = time_scale;

  const Command* snmap = nullptr;
  for (const auto& c : text.preamble)
    if (c.kind == CommandKind::sn_map) snmap = &c;

  std::vector<std::unique_ptr<MockDrone>> mocks;
  std::vector<Endpoint> candidates;
  for (int i = 1; i <= mock_n; ++i) {
    MockConfig mc = base;
    mc.sn = "MOCK" + std::to_string(i);
    if (snmap)
      for (const auto& [idx, sn] : snmap->sn_map)
        if (idx == i) mc.sn = sn;
    auto pit = profiles.find(i);
    if (pit == profiles.end()) pit = profiles.find(0);
    if (pit != profiles.end()) mc.faults = pit->second;
    if (mc.faults.rng_seed == 1) mc.faults.rng_seed = 1000 + i;
    mocks.push_back(std::make_unique<MockDrone>(mc));
    candidates.push_back(mocks.back()->endpoint());
  }
  for (const auto& tok : split_csv(endpoints_csv))
    candidates.push_back(parse_endpoint(tok, 8889));
  if (candidates.empty())
    throw ValidationError("no drones: pass --mock <n> or --endpoints <list>");

  RetryPolicy policy;
  policy.time_scale = time_scale;
  LinkEngine engine(policy);
  ExecuteResult res = engine.run(text, candidates);
  write_file(out_path, res.log.to_text());

  if (!res.completed) {
    std::fprintf(stderr, "mission aborted: %s\n", res.abort_reason.c_str());
    std::printf("flight log written to %s\n", out_path.c_str());
    return 3;
  }
  std::printf("mission completed; flight log written to %s\n", out_path.c_str());
  return 0;
}

int cmd_report(const std::string& log_path, const std::string& plan_path,
               const std::string& out_dir) {
  auto entries = parse_flight_log(read_file(log_path));
  MissionPlan plan = load_plan(plan_path);
  MissionReport rep = analyze_log(entries, plan);

  fs::create_directories(out_dir);
  fs::path dir(out_dir);
  write_file((dir / "battery.csv").string(), battery_csv(rep.curves));
  write_file((dir / "battery.svg").string(),
             render_battery_svg(rep.curves, plan.reserve_floor_pct));
  std::string summary = summary_text(rep, plan);
  write_file((dir / "summary.txt").string(), summary);
  std::fputs(summary.c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"emergency lighting with a drone fleet: plan deployments, "
               "compile flight text, fly against mock drones, report"};
  app.require_subcommand(1);

  std::string scenario_path, plan_path, text_path, log_path;
  std::string out_dir = "out", out_path;
  std::string sn_csv, faults_path, endpoints_csv, physics_path;
  uint64_t seed = 1;
  int mock_n = 0;
  double time_scale = 1.0;

  auto* plan = app.add_subcommand("plan", "compute a deployment plan");
  plan->add_option("scenario", scenario_path, "scenario JSON file")->required();
  plan->add_option("-o,--out", out_dir, "output directory");
  plan->add_option("--seed", seed, "base random seed");

  auto* compile = app.add_subcommand("compile", "compile a plan to flight text");
  compile->add_option("plan", plan_path, "plan JSON file")->required();
  compile->add_option("--sn", sn_csv, "comma-separated drone serial numbers")
      ->required();
  compile->add_option("-o,--out", out_path, "flight text output file")
      ->required();

  auto* fly = app.add_subcommand("fly", "execute flight text over UDP");
  fly->add_option("text", text_path, "flight text file")->required();
  fly->add_option("--mock", mock_n, "spawn this many simulated drones");
  fly->add_option("--faults", faults_path, "fault profile JSON");
  fly->add_option("--endpoints", endpoints_csv,
                  "comma-separated drone endpoints (host[:port])");
  fly->add_option("--physics", physics_path,
                  "scenario JSON the simulated drones take their physics from");
  fly->add_option("--time-scale", time_scale,
                  "simulation speedup; 40 runs a 400 s mission in 10 s");
  fly->add_option("-o,--out", out_path, "flight log output file")->required();

  auto* report = app.add_subcommand("report", "summarize a flight log");
  report->add_option("log", log_path, "flight log file")->required();
  report->add_option("plan", plan_path, "plan JSON file")->required();
  report->add_option("-o,--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(plan)) return cmd_plan(scenario_path, out_dir, seed);
    if (app.got_subcommand(compile))
      return cmd_compile(plan_path, sn_csv, out_path);
    if (app.got_subcommand(fly))
      return cmd_fly(text_path, mock_n, faults_path, endpoints_csv,
                     physics_path, time_scale, out_path);
    if (app.got_subcommand(report))
      return cmd_report(log_path, plan_path, out_dir);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const InfeasibleError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const LinkError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 3;
  }
  return 2;
}
