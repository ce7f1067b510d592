#include <cmath>
#include <numbers>

#include "doctest.h"
#include "uavlight/errors.hpp"
#include "uavlight/geometry.hpp"
#include "uavlight/rng.hpp"

using namespace uavlight;

TEST_CASE("horizontal distance basics") {
  CHECK(horizontal_distance(1.0, 2.0, 1.0, 2.0) == 0.0);
  CHECK(horizontal_distance(0.0, 0.0, 3.0, 4.0) == doctest::Approx(5.0));
  CHECK(horizontal_distance(0.0, 0.0, 2.0, 3.0) ==
        doctest::Approx(std::sqrt(13.0)).epsilon(1e-12));
}

TEST_CASE("max distance picks the farthest user") {
  UavPose pose{0.0, 0.0, 2.0};
  std::vector<UserRequest> users = {
      UserRequest{1.0, 0.0, 2, 10.0},
      UserRequest{0.0, -4.0, 2, 10.0},
      UserRequest{2.0, 2.0, 2, 10.0},
  };
  CHECK(max_distance(pose, users) == doctest::Approx(4.0));
  CHECK_THROWS_AS(max_distance(pose, {}), ValidationError);
}

TEST_CASE("lighting disk radius and area from cone geometry") {
  LightingDisk ground = lighting_disk(UavPose{1.0, 2.0, 0.0}, 30.0);
  CHECK(ground.radius == 0.0);
  CHECK(ground.area == 0.0);

  LightingDisk unit = lighting_disk(UavPose{0.0, 0.0, 1.0}, 45.0);
  CHECK(unit.radius == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(unit.area == doctest::Approx(std::numbers::pi).epsilon(1e-12));

  LightingDisk two = lighting_disk(UavPose{5.0, -3.0, 2.0}, 30.0);
  CHECK(two.center_x == 5.0);
  CHECK(two.center_y == -3.0);
  CHECK(two.radius == doctest::Approx(1.1547005383792515).epsilon(1e-12));
  CHECK(two.area == doctest::Approx(4.1887902047863905).epsilon(1e-12));
}

TEST_CASE("disk coverage includes the boundary") {
  LightingDisk d = lighting_disk(UavPose{0.0, 0.0, 2.0}, 45.0);
  CHECK(d.covers(2.0, 0.0));
  CHECK(d.covers(0.0, -2.0));
  CHECK(d.covers(1.0, 1.0));
  CHECK_FALSE(d.covers(2.001, 0.0));
}

TEST_CASE("bad cone angles are rejected") {
  CHECK_THROWS_AS(lighting_disk(UavPose{0, 0, 1.0}, 0.0), ValidationError);
  CHECK_THROWS_AS(lighting_disk(UavPose{0, 0, 1.0}, 90.0), ValidationError);
  CHECK_THROWS_AS(lighting_disk(UavPose{0, 0, -1.0}, 45.0), ValidationError);
}

TEST_CASE("height adjustment stays on the band floor for tight groups") {
  BrightnessBand band{2, 1.5, 2.2};
  CHECK(adjust_height(30.0, 0.5, band) == doctest::Approx(1.5));
}

TEST_CASE("height adjustment rises just enough to cover the spread") {
  BrightnessBand band{2, 1.5, 2.2};
  double h = adjust_height(30.0, 1.0, band);
  double tan30 = std::tan(30.0 * std::numbers::pi / 180.0);
  CHECK(h == doctest::Approx(1.0 / tan30).epsilon(1e-12));
  CHECK(h * tan30 >= 1.0 - 1e-9);
}

TEST_CASE("height adjustment fails when the ceiling cannot reach") {
  BrightnessBand band{2, 1.5, 2.2};
  CHECK_THROWS_AS(adjust_height(30.0, 1.3, band), InfeasibleError);
}

TEST_CASE("height adjustment covers and is minimal on fuzzed inputs") {
  Rng rng(321);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    double alpha = rng.uniform(10.0, 80.0);
    double tan_a = std::tan(alpha * std::numbers::pi / 180.0);
    BrightnessBand band;
    band.beta = 2;
    band.h_min = rng.uniform(0.5, 3.0);
    band.h_max = band.h_min + rng.uniform(0.1, 3.0);
    double d_max = rng.uniform(0.0, band.h_max * tan_a * 1.2);

    if (d_max > band.h_max * tan_a + kCoverageEps) {
      CHECK_THROWS_AS(adjust_height(alpha, d_max, band), InfeasibleError);
      continue;
    }
    double h = adjust_height(alpha, d_max, band);
    CHECK(h >= band.h_min);
    CHECK(h <= band.h_max + kCoverageEps);
    CHECK(h * tan_a >= d_max - 1e-9);
    CHECK(h <= std::max(band.h_min, d_max / tan_a) + 1e-9);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("height adjustment is monotone in the spread") {
  BrightnessBand band{3, 2.2, 3.0};
  double prev = 0.0;
  for (double d = 0.0; d <= 1.7; d += 0.05) {
    double h = adjust_height(30.0, d, band);
    CHECK(h >= prev);
    prev = h;
  }
}
