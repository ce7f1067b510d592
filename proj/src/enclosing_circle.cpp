#include "uavlight/enclosing_circle.hpp"

#include <cmath>

#include "uavlight/rng.hpp"

namespace uavlight {

namespace {

struct Pt {
  double x;
  double y;
};

bool inside(const Circle& c, const Pt& p) {
  double eps = 1e-10 * (1.0 + c.radius);
  return std::hypot(p.x - c.x, p.y - c.y) <= c.radius + eps;
}

Circle from_one(const Pt& a) { return Circle{a.x, a.y, 0.0}; }

Circle from_two(const Pt& a, const Pt& b) {
  Circle c;
  c.x = 0.5 * (a.x + b.x);
  c.y = 0.5 * (a.y + b.y);
  c.radius = 0.5 * std::hypot(b.x - a.x, b.y - a.y);
  return c;
}

Circle from_three(const Pt& a, const Pt& b, const Pt& c) {
  // Work relative to a for numerical stability.
  double bx = b.x - a.x, by = b.y - a.y;
  double cx = c.x - a.x, cy = c.y - a.y;
  double d = 2.0 * (bx * cy - by * cx);
  double scale = std::max({std::fabs(bx), std::fabs(by), std::fabs(cx),
                           std::fabs(cy), 1.0});
  if (std::fabs(d) < 1e-12 * scale * scale) {
    // Collinear: the widest pair circle already holds all three.
    Circle best = from_two(a, b);
    for (const Circle& cand : {from_two(a, c), from_two(b, c)})
      if (cand.radius > best.radius) best = cand;
    return best;
  }
  double b2 = bx * bx + by * by;
  double c2 = cx * cx + cy * cy;
  double ux = (cy * b2 - by * c2) / d;
  double uy = (bx * c2 - cx * b2) / d;
  Circle out;
  out.x = a.x + ux;
  out.y = a.y + uy;
  out.radius = std::hypot(ux, uy);
  return out;
}

}  // namespace

bool Circle::contains(double px, double py, double eps) const {
  return std::hypot(px - x, py - y) <= radius + eps;
}

Circle enclosing_circle(const std::vector<std::pair<double, double>>& points) {
  if (points.empty()) return Circle{};

  std::vector<Pt> pts;
  pts.reserve(points.size());
  for (const auto& p : points) pts.push_back(Pt{p.first, p.second});

  // Randomized incremental construction; fixed seed keeps it deterministic.
  Rng rng(0x9e3779b97f4a7c15ull);
  for (size_t i = pts.size(); i > 1; --i)
    std::swap(pts[i - 1], pts[rng.below(i)]);

  Circle c = from_one(pts[0]);
  for (size_t i = 1; i < pts.size(); ++i) {
    if (inside(c, pts[i])) continue;
    c = from_one(pts[i]);
    for (size_t j = 0; j < i; ++j) {
      if (inside(c, pts[j])) continue;
      c = from_two(pts[i], pts[j]);
      for (size_t k = 0; k < j; ++k) {
        if (inside(c, pts[k])) continue;
        c = from_three(pts[i], pts[j], pts[k]);
      }
    }
  }
  return c;
}

Circle exact_one_center(const std::vector<UserRequest>& users) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(users.size());
  for (const auto& u : users) pts.emplace_back(u.x, u.y);
  return enclosing_circle(pts);
}

}  // namespace uavlight
