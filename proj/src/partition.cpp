#include "uavlight/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "uavlight/enclosing_circle.hpp"
#include "uavlight/errors.hpp"
#include "uavlight/geometry.hpp"

namespace uavlight {

namespace {

int min_beta(const Scenario& s, const std::vector<int>& idx) {
  int b = 3;
  for (int i : idx) b = std::min(b, s.users[i].beta);
  return b;
}

bool feasible(const Scenario& s, const std::vector<int>& idx, double tan_a) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(idx.size());
  for (int i : idx) pts.emplace_back(s.users[i].x, s.users[i].y);
  Circle c = enclosing_circle(pts);
  const auto& band = s.band_for(min_beta(s, idx));
  return c.radius <= band.h_max * tan_a + kCoverageEps;
}

// Deterministic two-means split along the higher-variance axis. Falls back
// to a median split when a side comes out empty.
std::pair<std::vector<int>, std::vector<int>> bisect(
    const Scenario& s, const std::vector<int>& idx) {
  double mx = 0.0, my = 0.0;
  for (int i : idx) {
    mx += s.users[i].x;
    my += s.users[i].y;
  }
  mx /= static_cast<double>(idx.size());
  my /= static_cast<double>(idx.size());
  double vx = 0.0, vy = 0.0;
  for (int i : idx) {
    vx += (s.users[i].x - mx) * (s.users[i].x - mx);
    vy += (s.users[i].y - my) * (s.users[i].y - my);
  }
  bool along_x = vx >= vy;
  auto coord = [&](int i) { return along_x ? s.users[i].x : s.users[i].y; };

  int lo = idx[0], hi = idx[0];
  for (int i : idx) {
    if (coord(i) < coord(lo)) lo = i;
    if (coord(i) > coord(hi)) hi = i;
  }

  double c1x = s.users[lo].x, c1y = s.users[lo].y;
  double c2x = s.users[hi].x, c2y = s.users[hi].y;
  std::vector<int> a, b;
  for (int round = 0; round < 50; ++round) {
    std::vector<int> na, nb;
    for (int i : idx) {
      double d1 = horizontal_distance(s.users[i].x, s.users[i].y, c1x, c1y);
      double d2 = horizontal_distance(s.users[i].x, s.users[i].y, c2x, c2y);
      (d1 <= d2 ? na : nb).push_back(i);
    }
    if (na == a && nb == b) break;
    a = std::move(na);
    b = std::move(nb);
    if (a.empty() || b.empty()) break;
    c1x = c1y = c2x = c2y = 0.0;
    for (int i : a) {
      c1x += s.users[i].x;
      c1y += s.users[i].y;
    }
    for (int i : b) {
      c2x += s.users[i].x;
      c2y += s.users[i].y;
    }
    c1x /= static_cast<double>(a.size());
    c1y /= static_cast<double>(a.size());
    c2x /= static_cast<double>(b.size());
    c2y /= static_cast<double>(b.size());
  }

  if (a.empty() || b.empty()) {
    std::vector<int> sorted = idx;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [&](int l, int r) { return coord(l) < coord(r); });
    size_t half = sorted.size() / 2;
    a.assign(sorted.begin(), sorted.begin() + half);
    b.assign(sorted.begin() + half, sorted.end());
  }
  return {a, b};
}

void split_until_feasible(const Scenario& s, std::vector<int> idx, double tan_a,
                          std::vector<std::vector<int>>& out) {
  if (feasible(s, idx, tan_a)) {
    out.push_back(std::move(idx));
    return;
  }
  auto [a, b] = bisect(s, idx);
  split_until_feasible(s, std::move(a), tan_a, out);
  split_until_feasible(s, std::move(b), tan_a, out);
}

}  // namespace

Assignment partition_users(const Scenario& s) {
  validate(s);
  double tan_a = std::tan(s.light_angle_deg * std::numbers::pi / 180.0);

  std::vector<int> all(s.users.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);

  std::vector<std::vector<int>> groups;
  if (feasible(s, all, tan_a)) {
    groups.push_back(std::move(all));
  } else {
    std::map<int, std::vector<int>> by_beta;
    for (int i : all) by_beta[s.users[i].beta].push_back(i);
    for (auto& [beta, idx] : by_beta)
      split_until_feasible(s, std::move(idx), tan_a, groups);
  }

  if (static_cast<int>(groups.size()) > s.fleet_size())
    throw FleetExhaustedError(
        "need " + std::to_string(groups.size()) + " drones but fleet has " +
        std::to_string(s.fleet_size()));

  Assignment a;
  for (size_t k = 0; k < groups.size(); ++k) {
    Cluster c;
    c.user_indices = std::move(groups[k]);
    c.band = s.band_for(min_beta(s, c.user_indices));
    c.uav_index = static_cast<int>(k);
    a.clusters.push_back(std::move(c));
  }
  return a;
}

}  // namespace uavlight
