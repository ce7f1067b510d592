#include "uavlight/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uavlight/errors.hpp"
#include "uavlight/geometry.hpp"
#include "uavlight/rng.hpp"

namespace uavlight {

void validate(const AnnealConfig& cfg) {
  if (!(cfg.t_init > 0.0) || !(cfg.t_end > 0.0) || !(cfg.t_init > cfg.t_end))
    throw ValidationError("need t_init > t_end > 0");
  if (!(cfg.cooling > 0.0 && cfg.cooling < 1.0))
    throw ValidationError("cooling must be in (0, 1)");
  if (cfg.inner_iters < 1)
    throw ValidationError("inner_iters must be at least 1");
}

double placement_objective(double x, double y,
                           const std::vector<UserRequest>& users) {
  return max_distance(UavPose{x, y, 0.0}, users);
}

bool metropolis_accept(double delta_f, double temperature, double rand_u) {
  if (!(temperature > 0.0))
    throw ValidationError("temperature must be positive");
  if (delta_f <= 0.0) return true;
  return rand_u < std::exp(-delta_f / temperature);
}

AnnealTrace anneal_placement(const std::vector<UserRequest>& users,
                             const AnnealConfig& cfg) {
  validate(cfg);
  if (users.empty()) throw ValidationError("anneal needs at least one user");

  double min_x = users[0].x, max_x = users[0].x;
  double min_y = users[0].y, max_y = users[0].y;
  double cx = 0.0, cy = 0.0;
  for (const auto& u : users) {
    min_x = std::min(min_x, u.x);
    max_x = std::max(max_x, u.x);
    min_y = std::min(min_y, u.y);
    max_y = std::max(max_y, u.y);
    cx += u.x;
    cy += u.y;
  }
  cx /= static_cast<double>(users.size());
  cy /= static_cast<double>(users.size());

  // Proposals stay inside the user bounding box inflated by 10%.
  double pad_x = 0.05 * (max_x - min_x);
  double pad_y = 0.05 * (max_y - min_y);
  double lo_x = min_x - pad_x, hi_x = max_x + pad_x;
  double lo_y = min_y - pad_y, hi_y = max_y + pad_y;

  double step = cfg.step_scale;
  if (step <= 0.0)
    step = 0.5 * std::hypot(max_x - min_x, max_y - min_y);

  Rng rng(cfg.rng_seed);
  double x = cx, y = cy;
  if (cfg.random_start) {
    x = rng.uniform(lo_x, hi_x);
    y = rng.uniform(lo_y, hi_y);
  }
  double f = placement_objective(x, y, users);

  AnnealTrace trace;
  trace.best_x = x;
  trace.best_y = y;
  trace.best_f = f;

  for (double t = cfg.t_init; t > cfg.t_end; t *= cfg.cooling) {
    double sigma = step * (t / cfg.t_init);
    for (int i = 0; i < cfg.inner_iters; ++i) {
      double px = std::clamp(x + sigma * rng.gaussian(), lo_x, hi_x);
      double py = std::clamp(y + sigma * rng.gaussian(), lo_y, hi_y);
      double pf = placement_objective(px, py, users);
      double u = rng.uniform();
      if (metropolis_accept(pf - f, t, u)) {
        x = px;
        y = py;
        f = pf;
        if (f < trace.best_f) {
          trace.best_f = f;
          trace.best_x = x;
          trace.best_y = y;
        }
      }
    }
    trace.entries.push_back(TraceEntry{t, f, trace.best_f});
  }
  return trace;
}

std::string trace_to_csv(const AnnealTrace& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "step,temperature,current_f,best_f\n";
  for (size_t i = 0; i < trace.entries.size(); ++i) {
    const auto& e = trace.entries[i];
    out << i << ',' << e.temperature << ',' << e.current_f << ',' << e.best_f
        << '\n';
  }
  return out.str();
}

}  // namespace uavlight
