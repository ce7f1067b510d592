#pragma once

#include <string>
#include <utility>
#include <vector>

#include "uavlight/mission.hpp"

namespace uavlight {

// Tiny SVG builder; fixed pixel canvas, shapes appended in paint order.
class SvgDoc {
public:
  SvgDoc(double width, double height, const std::string& background);

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "", double stroke_width = 0.0);
  void circle(double cx, double cy, double r, const std::string& fill,
              double fill_opacity, const std::string& stroke,
              double stroke_width);
  void line(double x1, double y1, double x2, double y2,
            const std::string& stroke, double width,
            const std::string& dash = "");
  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& stroke, double width,
                const std::string& dash = "");
  void text(double x, double y, double size, const std::string& fill,
            const std::string& content, const std::string& anchor = "");

  std::string str() const;

private:
  double width_ = 0.0;
  double height_ = 0.0;
  std::vector<std::string> body_;
};

// One drone's battery level over the mission, in seconds since start.
struct BatteryCurve {
  int drone = 0;
  std::vector<std::pair<double, double>> points;  // (t_s, pct)
};

// Overhead view of the plan: users as squares colored by brightness level,
// homes, dashed deploy paths, and one disk outline per lighting area. The
// disks are the only circle elements in the document.
std::string render_map_svg(const MissionPlan& plan);

// Battery-vs-time line chart, one polyline per drone, with the reserve
// floor marked.
std::string render_battery_svg(const std::vector<BatteryCurve>& curves,
                               double floor_pct);

}  // namespace uavlight
