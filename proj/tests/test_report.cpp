#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "uavlight/errors.hpp"
#include "uavlight/report.hpp"
#include "uavlight/svg.hpp"

using namespace uavlight;
using namespace testutil;

namespace {

LogEntry entry(long long ms, int drone, LogEntry::Dir dir, const std::string& text,
               double battery = -1.0) {
  return LogEntry{ms, drone, dir, text, battery};
}

// A minimal believable single-drone mission trace.
std::vector<LogEntry> sample_entries() {
  return {
      entry(0, 0, LogEntry::Dir::event, "scan for 1 drones across 1 endpoints"),
      entry(100, 1, LogEntry::Dir::recv, "100", 100.0),
      entry(1000, 1, LogEntry::Dir::sent, "takeoff"),
      entry(3000, 1, LogEntry::Dir::recv, "ok"),
      entry(3000, 1, LogEntry::Dir::sent, "up 100"),
      entry(4000, 1, LogEntry::Dir::recv, "ok"),
      entry(5000, 1, LogEntry::Dir::sent, "battery?"),
      entry(5100, 1, LogEntry::Dir::recv, "90", 90.0),
      entry(6000, 1, LogEntry::Dir::event, "timeout, retry 'forward 100'"),
      entry(6000, 1, LogEntry::Dir::sent, "forward 100"),
      entry(7000, 1, LogEntry::Dir::recv, "ok"),
      entry(9000, 1, LogEntry::Dir::sent, "land"),
      entry(10000, 1, LogEntry::Dir::recv, "ok"),
  };
}

int count_substr(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (size_t at = hay.find(needle); at != std::string::npos;
       at = hay.find(needle, at + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("flight logs round trip through text") {
  FlightLog log;
  log.entries = sample_entries();
  std::string text = log.to_text();

  auto parsed = parse_flight_log(text);
  REQUIRE(parsed.size() == log.entries.size());
  for (size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i].t_ms == log.entries[i].t_ms);
    CHECK(parsed[i].drone == log.entries[i].drone);
    CHECK(parsed[i].dir == log.entries[i].dir);
    CHECK(parsed[i].text == log.entries[i].text);
    CHECK(parsed[i].battery == doctest::Approx(log.entries[i].battery));
  }
}

TEST_CASE("log parsing rejects malformed lines") {
  try {
    parse_flight_log("0 1 SVNT ok\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(std::string(e.what()).find("bad direction") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_flight_log("abc 1 SENT ok\n"), ParseError);
  CHECK_THROWS_AS(parse_flight_log("5 0 SENT ok\n"), ParseError);
  CHECK_THROWS_AS(parse_flight_log("0 1 RECV\n"), ParseError);
  CHECK_THROWS_AS(parse_flight_log("0 1 RECV battery=12\n"), ParseError);
  CHECK_THROWS_AS(parse_flight_log("0 1 RECV 90 battery=abc\n"), ParseError);

  try {
    parse_flight_log("0 - EVENT x\n5 1 RECV ok\n3 1 RECV ok\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("backwards") != std::string::npos);
  }

  CHECK_THROWS_WITH_AS(parse_flight_log(""), "log is empty", ParseError);
  CHECK_THROWS_AS(parse_flight_log("\n\n"), ParseError);
}

TEST_CASE("battery readings anchor the reconstructed curve") {
  MissionPlan plan = plan_mission(dense_scenario());
  MissionReport rep = analyze_log(sample_entries(), plan);

  CHECK(rep.completed);
  CHECK(rep.abort_reason.empty());
  CHECK(rep.span_ms == 10000);

  REQUIRE(rep.drones.size() == 1);
  const DroneReport& d = rep.drones[0];
  CHECK(d.drone == 1);
  CHECK(d.takeoff_ms == 3000);
  CHECK(d.land_ms == 10000);
  CHECK(d.retries == 1);
  CHECK(d.motion_acks == 4);
  CHECK(d.first_reading_pct == doctest::Approx(100.0));
  CHECK(d.last_reading_pct == doctest::Approx(90.0));
  CHECK(d.predicted_end_pct ==
        doctest::Approx(plan.uavs[0].battery_start_pct -
                        plan.uavs[0].energy.pct_total));

  REQUIRE(rep.curves.size() == 1);
  const auto& pts = rep.curves[0].points;
  REQUIRE(pts.size() >= 2);
  CHECK(pts.front().first == doctest::Approx(0.1));
  CHECK(pts.front().second == doctest::Approx(100.0));
  CHECK(pts.back().first == doctest::Approx(5.1));
  CHECK(pts.back().second == doctest::Approx(90.0));
  for (size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i].first >= pts[i - 1].first);
    CHECK(pts[i].second <= pts[i - 1].second + 1e-9);
  }
}

TEST_CASE("an abort event marks the mission failed") {
  auto entries = sample_entries();
  entries.push_back(entry(10500, 0, LogEntry::Dir::event,
                          "abort: drone 1 stopped answering 'forward 100'"));
  MissionPlan plan = plan_mission(dense_scenario());
  MissionReport rep = analyze_log(entries, plan);

  CHECK(!rep.completed);
  CHECK(rep.abort_reason == "drone 1 stopped answering 'forward 100'");

  std::string summary = summary_text(rep, plan);
  CHECK(summary.find("mission: aborted (drone 1") != std::string::npos);
}

TEST_CASE("battery curves export as fixed precision csv") {
  std::vector<BatteryCurve> curves(2);
  curves[0].drone = 1;
  curves[0].points = {{0.0, 100.0}, {1.5, 97.25}};
  curves[1].drone = 2;
  curves[1].points = {{0.25, 99.0}};

  CHECK(battery_csv(curves) ==
        "t_s,drone,battery_pct\n"
        "0.000,1,100.0000\n"
        "1.500,1,97.2500\n"
        "0.250,2,99.0000\n");
}

TEST_CASE("the summary names the key numbers") {
  MissionPlan plan = plan_mission(dense_scenario());
  MissionReport rep = analyze_log(sample_entries(), plan);
  std::string summary = summary_text(rep, plan);

  CHECK(summary.find("mission: completed") != std::string::npos);
  CHECK(summary.find("span: 10.0 s") != std::string::npos);
  CHECK(summary.find("drone 1:") != std::string::npos);
  CHECK(summary.find("takeoff 3.0s") != std::string::npos);
  CHECK(summary.find("landed 10.0s") != std::string::npos);
  CHECK(summary.find("battery 100% -> 90%") != std::string::npos);
  CHECK(summary.find("motions 4, retries 1") != std::string::npos);
  CHECK(summary.find("model end") != std::string::npos);
}

TEST_CASE("relief handovers appear in the summary") {
  MissionPlan plan = plan_mission(relief_scenario());
  REQUIRE(!plan.replacements.empty());
  MissionReport rep;
  rep.completed = true;
  std::string summary = summary_text(rep, plan);
  CHECK(summary.find("relief: drone 2 takes over from drone 1") !=
        std::string::npos);
}

TEST_CASE("the map shows one disk per lighting drone") {
  MissionPlan dense = plan_mission(dense_scenario());
  std::string map = render_map_svg(dense);
  CHECK(count_substr(map, "<circle") == 1);
  CHECK(map.find("<rect") != std::string::npos);
  CHECK(map.find("deployment map") != std::string::npos);

  MissionPlan sparse = plan_mission(sparse_scenario());
  CHECK(count_substr(render_map_svg(sparse), "<circle") == 2);

  // Relief drones reuse the incumbent's disk instead of adding their own.
  MissionPlan relief = plan_mission(relief_scenario());
  int lighting = 0;
  for (const auto& u : relief.uavs)
    if (!u.is_relief) ++lighting;
  CHECK(count_substr(render_map_svg(relief), "<circle") == lighting);
}

TEST_CASE("the battery chart marks the reserve floor") {
  std::vector<BatteryCurve> curves(1);
  curves[0].drone = 1;
  curves[0].points = {{0.0, 100.0}, {30.0, 80.0}, {60.0, 55.0}};

  std::string chart = render_battery_svg(curves, 5.0);
  CHECK(chart.find("<polyline") != std::string::npos);
  CHECK(chart.find("reserve") != std::string::npos);
  CHECK(chart.find("drone 1") != std::string::npos);
  CHECK(count_substr(chart, "<circle") == 0);

  std::string no_floor = render_battery_svg(curves, 0.0);
  CHECK(no_floor.find("reserve") == std::string::npos);
}
