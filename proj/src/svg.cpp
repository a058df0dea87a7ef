#include "hypbill/svg.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hypb {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << x;
  return os.str();
}

}  // namespace

PoincareSvg::PoincareSvg(int size) : size_(size), scale_(0.47 * size) {}

Vec2 PoincareSvg::screen(const Vec2& w) const { return Vec2(size_ / 2.0 + scale_ * w.x(), size_ / 2.0 - scale_ * w.y()); }

std::string PoincareSvg::arc_path(const Vec2& a, const Vec2& b, double scale, double offset) {
  auto scr = [&](const Vec2& w) { return Vec2(offset + scale * w.x(), offset - scale * w.y()); };
  Vec2 sa = scr(a), sb = scr(b);
  std::string head = "M " + num(sa.x()) + " " + num(sa.y()) + " ";
  double det = a.x() * b.y() - a.y() * b.x();
  if (std::abs(det) < 1e-9) return head + "L " + num(sb.x()) + " " + num(sb.y());
  // Centre c of the orthogonal circle: c.a = (|a|^2+1)/2, c.b = (|b|^2+1)/2.
  double ra = (a.squaredNorm() + 1.0) / 2.0, rb = (b.squaredNorm() + 1.0) / 2.0;
  Vec2 c((ra * b.y() - rb * a.y()) / det, (a.x() * rb - b.x() * ra) / det);
  double r = std::sqrt(std::max(0.0, c.squaredNorm() - 1.0)) * scale;
  Vec2 sc = scr(c);
  Vec2 u = sa - sc, v = sb - sc;
  int sweep = u.x() * v.y() - u.y() * v.x() > 0 ? 1 : 0;
  return head + "A " + num(r) + " " + num(r) + " 0 0 " + std::to_string(sweep) + " " + num(sb.x()) + " " +
         num(sb.y());
}

void PoincareSvg::segment(const HPoint& a, const HPoint& b, const std::string& stroke, double width) {
  body_ += "<path d=\"" + arc_path(to_poincare(a), to_poincare(b), scale_, size_ / 2.0) + "\" stroke=\"" + stroke +
           "\" stroke-width=\"" + num(width) + "\" fill=\"none\"/>\n";
}

void PoincareSvg::line(const HGeodesic& g, const std::string& stroke, double width) {
  KleinChord k = to_klein_line(g);
  // Ideal endpoints coincide in both models.
  body_ += "<path d=\"" + arc_path(k.a, k.b, scale_, size_ / 2.0) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
           num(width) + "\" fill=\"none\"/>\n";
}

void PoincareSvg::polygon(const LabeledPolygon& poly, const std::string& stroke, const std::string& fill,
                          bool labels) {
  std::string d;
  for (int s = 0; s < poly.size(); ++s) {
    std::string p = arc_path(to_poincare(poly.vertex(s)), to_poincare(poly.vertex(s + 1)), scale_, size_ / 2.0);
    // Continuation pieces drop their moveto.
    d += s == 0 ? p : " " + p.substr(p.find_first_of("AL"));
  }
  body_ += "<path d=\"" + d + " Z\" stroke=\"" + stroke + "\" stroke-width=\"1.5\" fill=\"" + fill +
           "\" fill-opacity=\"0.15\"/>\n";
  if (!labels) return;
  for (int s = 0; s < poly.size(); ++s) {
    HPoint mid = point_along(poly.vertex(s), unit_tangent(poly.vertex(s), poly.vertex(s + 1)),
                             poly.side_length(s) / 2.0);
    Vec2 p = screen(to_poincare(mid));
    body_ += "<text x=\"" + num(p.x()) + "\" y=\"" + num(p.y()) + "\" font-size=\"12\" fill=\"#555\">" +
             std::to_string(s + 1) + "</text>\n";
  }
}

void PoincareSvg::trajectory(const Trajectory& t, const std::string& stroke) {
  HPoint prev = t.start;
  for (const auto& e : t.events) {
    segment(prev, e.hit_point, stroke, 1.0);
    prev = e.hit_point;
  }
  if (t.vertex_hit) segment(prev, t.end_point, stroke, 1.0);
  dot(t.start, 3.0, stroke);
}

void PoincareSvg::dot(const HPoint& p, double radius, const std::string& fill) {
  Vec2 s = screen(to_poincare(p));
  body_ += "<circle cx=\"" + num(s.x()) + "\" cy=\"" + num(s.y()) + "\" r=\"" + num(radius) + "\" fill=\"" + fill +
           "\"/>\n";
}

std::string PoincareSvg::str() const {
  std::string sz = std::to_string(size_);
  std::string c = num(size_ / 2.0);
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         sz + "\" height=\"" + sz + "\" viewBox=\"0 0 " + sz + " " + sz + "\">\n<circle cx=\"" + c + "\" cy=\"" + c +
         "\" r=\"" + num(scale_) + "\" stroke=\"#888\" fill=\"none\"/>\n" + body_ + "</svg>\n";
}

void PoincareSvg::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << str();
}

}  // namespace hypb
