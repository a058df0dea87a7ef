#pragma once

#include "hypbill/billiards.hpp"

#include <string>

namespace hypb {

/// SVG 1.1 drawing in the Poincare disk. Geodesics become circular arcs
/// orthogonal to the boundary circle.
class PoincareSvg {
 public:
  explicit PoincareSvg(int size = 640);

  void segment(const HPoint& a, const HPoint& b, const std::string& stroke, double width = 1.0);
  void line(const HGeodesic& g, const std::string& stroke, double width = 0.5);
  void polygon(const LabeledPolygon& poly, const std::string& stroke = "#000", const std::string& fill = "none",
               bool labels = true);
  void trajectory(const Trajectory& t, const std::string& stroke = "#c0392b");
  void dot(const HPoint& p, double radius, const std::string& fill);

  std::string str() const;
  void save(const std::string& path) const;

  /// Arc path between two points of the closed disk, in disk coordinates.
  static std::string arc_path(const Vec2& a, const Vec2& b, double scale, double offset);

 private:
  Vec2 screen(const Vec2& w) const;
  int size_;
  double scale_;
  std::string body_;
};

}  // namespace hypb
