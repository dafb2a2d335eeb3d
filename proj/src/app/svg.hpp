#pragma once

// Minimal SVG writer on a fixed 800 x 800 canvas. Coordinates are printed
// with three decimals so identical inputs give identical files.

#include <cstdio>
#include <string>
#include <vector>

#include "tlab/curve.hpp"
#include "tlab/vec2.hpp"

namespace tlab {

class Svg {
public:
  static constexpr double kCanvas = 800.0;

  explicit Svg(const Box& world) : world_(world) {
    const double w = world[1] - world[0], h = world[3] - world[2];
    scale_ = (kCanvas - 40.0) / std::max(w, h);
    ox_ = 0.5 * (kCanvas - scale_ * w);
    oy_ = 0.5 * (kCanvas - scale_ * h);
    body_ += "<rect width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n";
  }

  void polyline(const std::vector<Vec2>& pts, const std::string& stroke, double width, bool closed = false) {
    if (pts.size() < 2) return;
    body_ += closed ? "<polygon" : "<polyline";
    body_ += " fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt(width) + "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) body_ += ' ';
      Vec2 c = map(pts[i]);
      body_ += fmt(c.x) + "," + fmt(c.y);
    }
    body_ += "\"/>\n";
  }

  void dot(Vec2 p, double radius, const std::string& fill) {
    Vec2 c = map(p);
    body_ += "<circle cx=\"" + fmt(c.x) + "\" cy=\"" + fmt(c.y) + "\" r=\"" + fmt(radius) + "\" fill=\"" + fill + "\"/>\n";
  }

  void label(Vec2 p, const std::string& text) {
    Vec2 c = map(p);
    body_ += "<text x=\"" + fmt(c.x + 6.0) + "\" y=\"" + fmt(c.y - 6.0) +
             "\" font-family=\"monospace\" font-size=\"14\">" + text + "</text>\n";
  }

  void title(const std::string& text) {
    body_ += "<text x=\"20\" y=\"24\" font-family=\"monospace\" font-size=\"16\">" + text + "</text>\n";
  }

  std::string str() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n" + body_ +
           "</svg>\n";
  }

private:
  Vec2 map(Vec2 p) const { return {ox_ + scale_ * (p.x - world_[0]), kCanvas - (oy_ + scale_ * (p.y - world_[2]))}; }

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
  }

  Box world_;
  double scale_, ox_, oy_;
  std::string body_;
};

}  // namespace tlab
