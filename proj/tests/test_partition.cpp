#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "uavlight/errors.hpp"
#include "uavlight/partition.hpp"

using namespace uavlight;

namespace {

std::set<int> flatten(const Assignment& a) {
  std::set<int> all;
  for (const auto& c : a.clusters)
    for (int i : c.user_indices) all.insert(i);
  return all;
}

}  // namespace

TEST_CASE("a tight group becomes a single cluster") {
  Scenario s = testutil::dense_scenario();
  Assignment a = partition_users(s);
  REQUIRE(a.clusters.size() == 1);
  CHECK(a.clusters[0].user_indices.size() == s.users.size());
  CHECK(a.clusters[0].uav_index == 0);
  CHECK(a.clusters[0].band.beta == 2);
}

TEST_CASE("every user lands in exactly one cluster") {
  Scenario s = testutil::sparse_scenario();
  Assignment a = partition_users(s);
  std::set<int> all = flatten(a);
  CHECK(all.size() == s.users.size());
  size_t total = 0;
  for (const auto& c : a.clusters) total += c.user_indices.size();
  CHECK(total == s.users.size());
}

TEST_CASE("brightness levels split before geometry") {
  Scenario s;
  // Both levels are co-feasible on their own, hopeless together because
  // the brightest band caps the shared altitude.
  s.users = {
      UserRequest{0.0, 0.0, 1, 10.0}, UserRequest{1.5, 0.0, 1, 10.0},
      UserRequest{10.0, 0.0, 2, 10.0}, UserRequest{11.5, 0.0, 2, 10.0},
  };
  s.homes = {UavPose{0, 0, 0}, UavPose{10, 0, 0}};
  Assignment a = partition_users(s);
  REQUIRE(a.clusters.size() == 2);
  std::set<int> betas;
  for (const auto& c : a.clusters) {
    betas.insert(c.band.beta);
    int want = c.band.beta;
    for (int i : c.user_indices) CHECK(s.users[i].beta == want);
  }
  CHECK(betas == std::set<int>{1, 2});
}

TEST_CASE("spread groups of one level split spatially") {
  Scenario s;
  s.users = {
      UserRequest{0.0, 0.0, 2, 10.0}, UserRequest{1.0, 0.0, 2, 10.0},
      UserRequest{100.0, 0.0, 2, 10.0}, UserRequest{101.0, 0.0, 2, 10.0},
  };
  s.homes = {UavPose{0, 0, 0}, UavPose{100, 0, 0}};
  Assignment a = partition_users(s);
  REQUIRE(a.clusters.size() == 2);

  std::set<std::set<int>> groups;
  for (const auto& c : a.clusters)
    groups.insert(std::set<int>(c.user_indices.begin(), c.user_indices.end()));
  CHECK(groups == std::set<std::set<int>>{{0, 1}, {2, 3}});
}

TEST_CASE("clusters take consecutive drone slots") {
  Scenario s = testutil::sparse_scenario();
  Assignment a = partition_users(s);
  std::vector<int> idx;
  for (const auto& c : a.clusters) idx.push_back(c.uav_index);
  std::sort(idx.begin(), idx.end());
  for (size_t i = 0; i < idx.size(); ++i)
    CHECK(idx[i] == static_cast<int>(i));
}

TEST_CASE("splitting stops at singletons which always fit") {
  Scenario s;
  s.users = {UserRequest{0.0, 0.0, 3, 10.0}, UserRequest{100.0, 0.0, 3, 10.0}};
  s.homes = {UavPose{0, 0, 0}, UavPose{100, 0, 0}};
  Assignment a = partition_users(s);
  CHECK(a.clusters.size() == 2);
  for (const auto& c : a.clusters) CHECK(c.user_indices.size() == 1);
}

TEST_CASE("too few drones raises a fleet error") {
  Scenario s;
  s.users = {
      UserRequest{0.0, 0.0, 2, 10.0}, UserRequest{1.0, 0.0, 2, 10.0},
      UserRequest{100.0, 0.0, 2, 10.0}, UserRequest{101.0, 0.0, 2, 10.0},
  };
  s.homes = {UavPose{0, 0, 0}};
  CHECK_THROWS_AS(partition_users(s), FleetExhaustedError);
}

TEST_CASE("cluster band is the brightest level present") {
  Scenario s;
  s.users = {UserRequest{0.0, 0.0, 3, 10.0}, UserRequest{0.3, 0.0, 1, 10.0},
             UserRequest{0.6, 0.0, 2, 10.0}};
  s.homes = {UavPose{0, 0, 0}};
  Assignment a = partition_users(s);
  REQUIRE(a.clusters.size() == 1);
  CHECK(a.clusters[0].band.beta == 1);
}
