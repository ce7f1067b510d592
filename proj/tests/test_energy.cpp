#include <cmath>
#include <vector>

#include "doctest.h"
#include "uavlight/energy.hpp"
#include "uavlight/errors.hpp"

using namespace uavlight;

namespace {

TrajectorySegment hover(double secs) {
  return TrajectorySegment{Phase::light, 0, 0, 0, 0.0, secs};
}

TrajectorySegment level(double meters, double speed) {
  return TrajectorySegment{Phase::deploy, meters, 0, 0, speed, meters / speed};
}

constexpr double kBlade = 79.856280000000027;
constexpr double kInduced = 88.627937741082022;
constexpr double kHover = 168.48421774108203;

}  // namespace

TEST_CASE("hover power splits into blade and induced terms") {
  PropulsionParams p;
  HoverPowers hp = hover_powers(p);
  CHECK(hp.blade == doctest::Approx(kBlade).epsilon(1e-12));
  CHECK(hp.induced == doctest::Approx(kInduced).epsilon(1e-12));
  CHECK(hp.total() == doctest::Approx(kHover).epsilon(1e-12));
}

TEST_CASE("zero speed power equals hover power exactly") {
  PropulsionParams p;
  CHECK(propulsion_power(0.0, p) == hover_powers(p).total());
}

TEST_CASE("power curve is continuous at zero speed") {
  PropulsionParams p;
  CHECK(std::fabs(propulsion_power(1e-6, p) - propulsion_power(0.0, p)) < 1e-3);
}

TEST_CASE("power at reference speeds") {
  PropulsionParams p;
  CHECK(propulsion_power(2.0, p) == doctest::Approx(163.30814315779025).epsilon(1e-12));
  CHECK(propulsion_power(15.0, p) == doctest::Approx(109.42903398377018).epsilon(1e-12));
  CHECK(propulsion_power(30.0, p) == doctest::Approx(115.05144393471602).epsilon(1e-12));
}

TEST_CASE("power dips at cruise speed and climbs again when fast") {
  PropulsionParams p;
  double p0 = propulsion_power(0.0, p);
  double p15 = propulsion_power(15.0, p);
  double p30 = propulsion_power(30.0, p);
  CHECK(p15 < p0);
  CHECK(p30 > p15);
  CHECK(p30 / p15 == doctest::Approx(1.0513795082188124).epsilon(1e-12));
}

TEST_CASE("blade power scales with the cube of rotor speed") {
  PropulsionParams p;
  PropulsionParams fast = p;
  fast.blade_omega *= 2.0;
  fast.tip_speed = fast.blade_omega * fast.rotor_radius;
  CHECK(hover_powers(fast).blade ==
        doctest::Approx(8.0 * hover_powers(p).blade).epsilon(1e-12));
}

TEST_CASE("induced power scales with weight to the three halves") {
  PropulsionParams p;
  PropulsionParams heavy = p;
  heavy.weight *= 4.0;
  CHECK(hover_powers(heavy).induced ==
        doctest::Approx(8.0 * hover_powers(p).induced).epsilon(1e-12));
}

TEST_CASE("flight energy of a two leg trip") {
  PropulsionParams p;
  std::vector<TrajectorySegment> legs = {level(40.0, 2.0), hover(60.0)};
  CHECK(flight_energy(legs, p) ==
        doctest::Approx(13375.215927620728).epsilon(1e-12));
}

TEST_CASE("flight energy adds across split segment lists") {
  PropulsionParams p;
  std::vector<TrajectorySegment> a = {level(25.0, 1.0), hover(10.0)};
  std::vector<TrajectorySegment> b = {level(7.0, 0.7), hover(33.0)};
  std::vector<TrajectorySegment> both = a;
  both.insert(both.end(), b.begin(), b.end());
  double lhs = flight_energy(both, p);
  double rhs = flight_energy(a, p) + flight_energy(b, p);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
}

TEST_CASE("lighting drain is rate times duration") {
  CHECK(lighting_energy(100.0, 0.2) == doctest::Approx(20.0));
  CHECK(lighting_energy(60.0, 0.2) == doctest::Approx(12.0));
  CHECK(lighting_energy(0.0, 0.2) == 0.0);
  CHECK_THROWS_AS(lighting_energy(-1.0, 0.2), ValidationError);
  CHECK_THROWS_AS(lighting_energy(10.0, -0.1), ValidationError);
}

TEST_CASE("mission energy combines propulsion joules and lighting percent") {
  PropulsionParams p;
  std::vector<TrajectorySegment> legs = {level(40.0, 2.0), hover(60.0)};
  double capacity = 15500.0;
  EnergyBreakdown b = mission_energy(legs, 60.0, p, capacity, 0.2);
  CHECK(b.e_fly_j == doctest::Approx(flight_energy(legs, p)).epsilon(1e-12));
  CHECK(b.pct_light == doctest::Approx(12.0));
  CHECK(b.e_light_j == doctest::Approx(12.0 / 100.0 * capacity));
  CHECK(b.e_total_j == doctest::Approx(b.e_fly_j + b.e_light_j));
  CHECK(b.pct_fly == doctest::Approx(b.e_fly_j / capacity * 100.0));
  CHECK(b.pct_total == doctest::Approx(b.pct_fly + b.pct_light));
}

TEST_CASE("sufficiency with no flight overhead is a straight rate division") {
  EnergyBreakdown needed;
  needed.pct_total = 0.2 * 300.0;  // lighting only
  Sufficiency r = sufficiency_check(needed, 50.0, 10.0, 300.0, 0.2);
  CHECK_FALSE(r.sufficient);
  CHECK(r.serviceable_light_s == doctest::Approx(200.0));

  needed.pct_total = 0.2 * 100.0;
  r = sufficiency_check(needed, 50.0, 10.0, 100.0, 0.2);
  CHECK(r.sufficient);
  CHECK(r.serviceable_light_s == doctest::Approx(200.0));
}

TEST_CASE("sufficiency is zero when fixed costs already overrun") {
  EnergyBreakdown needed;
  needed.pct_total = 60.0 + 0.2 * 10.0;  // 60 % of flight, 10 s of light
  Sufficiency r = sufficiency_check(needed, 50.0, 5.0, 10.0, 0.2);
  CHECK_FALSE(r.sufficient);
  CHECK(r.serviceable_light_s == 0.0);
}

TEST_CASE("truncating to the serviceable time lands on the reserve") {
  EnergyBreakdown needed;
  double fixed = 14.0;
  double rate = 1.287;
  needed.pct_total = fixed + rate * 120.0;
  double battery = 100.0, reserve = 5.0;
  Sufficiency r = sufficiency_check(needed, battery, reserve, 120.0, rate);
  CHECK_FALSE(r.sufficient);
  double left = battery - fixed - rate * r.serviceable_light_s;
  CHECK(left == doctest::Approx(reserve).epsilon(0.0001));
}

TEST_CASE("propulsion parameters are validated") {
  PropulsionParams p;
  p.tip_speed = 200.0;  // no longer omega * radius
  CHECK_THROWS_AS(validate(p), ValidationError);

  PropulsionParams q;
  q.weight = -1.0;
  CHECK_THROWS_AS(validate(q), ValidationError);

  PropulsionParams ok;
  CHECK_NOTHROW(validate(ok));
}

TEST_CASE("negative speed is rejected") {
  PropulsionParams p;
  CHECK_THROWS_AS(propulsion_power(-1.0, p), ValidationError);
}
