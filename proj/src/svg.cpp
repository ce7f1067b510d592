#include "uavlight/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace uavlight {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* user_color(int beta) {
  switch (beta) {
    case 1: return "#4ade80";
    case 2: return "#fb923c";
    default: return "#f87171";
  }
}

const char* curve_color(int i) {
  static const char* palette[] = {"#38bdf8", "#4ade80", "#fb923c", "#f87171",
                                  "#a78bfa", "#facc15", "#2dd4bf", "#f472b6"};
  return palette[i % 8];
}

}  // namespace

SvgDoc::SvgDoc(double width, double height, const std::string& background)
    : width_(width), height_(height) {
  if (!background.empty())
    rect(0, 0, width, height, background);
}

void SvgDoc::rect(double x, double y, double w, double h,
                  const std::string& fill, const std::string& stroke,
                  double stroke_width) {
  std::string s = "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" +
                  fmt(w) + "\" height=\"" + fmt(h) + "\" fill=\"" +
                  (fill.empty() ? "none" : fill) + "\"";
  if (!stroke.empty())
    s += " stroke=\"" + stroke + "\" stroke-width=\"" + fmt(stroke_width) + "\"";
  s += "/>";
  body_.push_back(s);
}

void SvgDoc::circle(double cx, double cy, double r, const std::string& fill,
                    double fill_opacity, const std::string& stroke,
                    double stroke_width) {
  std::string s = "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) +
                  "\" r=\"" + fmt(r) + "\" fill=\"" +
                  (fill.empty() ? "none" : fill) + "\"";
  if (!fill.empty()) s += " fill-opacity=\"" + fmt(fill_opacity) + "\"";
  if (!stroke.empty())
    s += " stroke=\"" + stroke + "\" stroke-width=\"" + fmt(stroke_width) + "\"";
  s += "/>";
  body_.push_back(s);
}

void SvgDoc::line(double x1, double y1, double x2, double y2,
                  const std::string& stroke, double width,
                  const std::string& dash) {
  std::string s = "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" +
                  fmt(x2) + "\" y2=\"" + fmt(y2) + "\" stroke=\"" + stroke +
                  "\" stroke-width=\"" + fmt(width) + "\"";
  if (!dash.empty()) s += " stroke-dasharray=\"" + dash + "\"";
  s += "/>";
  body_.push_back(s);
}

void SvgDoc::polyline(const std::vector<std::pair<double, double>>& pts,
                      const std::string& stroke, double width,
                      const std::string& dash) {
  if (pts.size() < 2) return;
  std::string s = "<polyline points=\"";
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ' ';
    s += fmt(pts[i].first) + "," + fmt(pts[i].second);
  }
  s += "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
       fmt(width) + "\"";
  if (!dash.empty()) s += " stroke-dasharray=\"" + dash + "\"";
  s += "/>";
  body_.push_back(s);
}

void SvgDoc::text(double x, double y, double size, const std::string& fill,
                  const std::string& content, const std::string& anchor) {
  std::string s = "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) +
                  "\" font-size=\"" + fmt(size) +
                  "\" font-family=\"monospace\" fill=\"" + fill + "\"";
  if (!anchor.empty()) s += " text-anchor=\"" + anchor + "\"";
  s += ">" + escape(content) + "</text>";
  body_.push_back(s);
}

std::string SvgDoc::str() const {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width_)
      << "\" height=\"" << fmt(height_) << "\" viewBox=\"0 0 " << fmt(width_)
      << " " << fmt(height_) << "\">\n";
  for (const auto& s : body_) out << "  " << s << "\n";
  out << "</svg>\n";
  return out.str();
}

std::string render_map_svg(const MissionPlan& plan) {
  const double kw = 800.0, kh = 600.0, margin = 50.0;

  double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
  auto grow = [&](double x, double y) {
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  };
  double tan_a = std::tan(plan.light_angle_deg * std::numbers::pi / 180.0);
  for (const auto& u : plan.users) grow(u.x, u.y);
  for (const auto& h : plan.homes) grow(h.x, h.y);
  for (const auto& m : plan.uavs) {
    double r = m.flight.service_height * tan_a;
    grow(m.target_x - r, m.target_y - r);
    grow(m.target_x + r, m.target_y + r);
  }
  if (min_x > max_x) { min_x = min_y = 0.0; max_x = max_y = 1.0; }
  double bw = std::max(max_x - min_x, 1e-6);
  double bh = std::max(max_y - min_y, 1e-6);
  double pad = 0.05 * std::max(bw, bh);
  min_x -= pad; max_x += pad; min_y -= pad; max_y += pad;
  bw = max_x - min_x;
  bh = max_y - min_y;
  double scale = std::min((kw - 2 * margin) / bw, (kh - 2 * margin) / bh);
  double ox = (kw - bw * scale) / 2.0;
  double oy = (kh - bh * scale) / 2.0;
  auto sx = [&](double x) { return ox + (x - min_x) * scale; };
  auto sy = [&](double y) { return kh - oy - (y - min_y) * scale; };

  SvgDoc doc(kw, kh, "#0f172a");

  // Lighting disks, one per served cluster.
  for (const auto& m : plan.uavs) {
    if (m.is_relief) continue;
    double r = m.flight.service_height * tan_a;
    doc.circle(sx(m.target_x), sy(m.target_y), r * scale, "#facc15", 0.18,
               "#f59e0b", 1.5);
  }

  // Deploy paths, home to hover point.
  for (const auto& m : plan.uavs) {
    const char* color = m.is_relief ? "#a78bfa" : "#38bdf8";
    doc.line(sx(m.home.x), sy(m.home.y), sx(m.target_x), sy(m.target_y), color,
             1.2, m.is_relief ? "2 4" : "6 4");
  }

  // Homes.
  for (const auto& h : plan.homes) {
    doc.rect(sx(h.x) - 5, sy(h.y) - 5, 10, 10, "", "#94a3b8", 1.5);
  }

  // Hover points as crosses with index labels.
  for (const auto& m : plan.uavs) {
    double cx = sx(m.target_x), cy = sy(m.target_y);
    doc.line(cx - 5, cy, cx + 5, cy, "#e2e8f0", 1.5);
    doc.line(cx, cy - 5, cx, cy + 5, "#e2e8f0", 1.5);
    doc.text(cx + 7, cy - 7, 12, "#cbd5e1", std::to_string(m.uav_index + 1));
  }

  // Users colored by brightness level.
  for (const auto& u : plan.users) {
    doc.rect(sx(u.x) - 4, sy(u.y) - 4, 8, 8, user_color(u.beta));
  }

  // Legend.
  double lx = 14, ly = 20;
  doc.text(lx, ly, 13, "#e2e8f0", "deployment map");
  ly += 18;
  for (int beta = 1; beta <= 3; ++beta) {
    doc.rect(lx, ly - 8, 8, 8, user_color(beta));
    doc.text(lx + 14, ly, 11, "#cbd5e1", "level " + std::to_string(beta) + " user");
    ly += 15;
  }
  doc.rect(lx, ly - 8, 8, 8, "", "#94a3b8", 1.5);
  doc.text(lx + 14, ly, 11, "#cbd5e1", "home pad");
  ly += 15;
  doc.line(lx, ly - 4, lx + 8, ly - 4, "#38bdf8", 1.2, "6 4");
  doc.text(lx + 14, ly, 11, "#cbd5e1", "deploy path");

  return doc.str();
}

std::string render_battery_svg(const std::vector<BatteryCurve>& curves,
                               double floor_pct) {
  const double kw = 800.0, kh = 400.0;
  const double ml = 60.0, mr = 20.0, mt = 30.0, mb = 45.0;

  double t_max = 1.0;
  for (const auto& c : curves)
    for (const auto& p : c.points) t_max = std::max(t_max, p.first);

  auto sx = [&](double t) { return ml + t / t_max * (kw - ml - mr); };
  auto sy = [&](double pct) {
    return mt + (100.0 - pct) / 100.0 * (kh - mt - mb);
  };

  SvgDoc doc(kw, kh, "#0f172a");
  doc.text(ml, 18, 13, "#e2e8f0", "battery over mission time");

  for (int pct = 0; pct <= 100; pct += 20) {
    doc.line(ml, sy(pct), kw - mr, sy(pct), "#1e293b", 1.0);
    doc.text(ml - 8, sy(pct) + 4, 11, "#94a3b8", std::to_string(pct) + "%", "end");
  }
  int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    double t = t_max * i / ticks;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0fs", t);
    doc.line(sx(t), kh - mb, sx(t), kh - mb + 5, "#475569", 1.0);
    doc.text(sx(t), kh - mb + 18, 11, "#94a3b8", buf, "middle");
  }
  doc.line(ml, mt, ml, kh - mb, "#475569", 1.0);
  doc.line(ml, kh - mb, kw - mr, kh - mb, "#475569", 1.0);

  if (floor_pct > 0.0) {
    doc.line(ml, sy(floor_pct), kw - mr, sy(floor_pct), "#ef4444", 1.0, "4 4");
    doc.text(kw - mr, sy(floor_pct) - 4, 10, "#ef4444", "reserve", "end");
  }

  double ly = 18;
  for (size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    std::vector<std::pair<double, double>> pts;
    pts.reserve(c.points.size());
    for (const auto& p : c.points) pts.emplace_back(sx(p.first), sy(p.second));
    doc.polyline(pts, curve_color(static_cast<int>(i)), 2.0);
    doc.text(kw - mr - 70, ly, 11, curve_color(static_cast<int>(i)),
             "drone " + std::to_string(c.drone));
    ly += 14;
  }

  return doc.str();
}

}  // namespace uavlight
