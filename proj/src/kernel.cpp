#include "hypbill/kernel.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>

namespace hypb {

double minkowski(const Vec3& a, const Vec3& b) { return a.x() * b.x() + a.y() * b.y() - a.z() * b.z(); }

const Mat3& minkowski_metric() {
  static const Mat3 j = Vec3(1.0, 1.0, -1.0).asDiagonal();
  return j;
}

namespace {

Vec3 jmul(const Vec3& v) { return Vec3(v.x(), v.y(), -v.z()); }

}  // namespace

HPoint HPoint::from_coords(const Vec3& v) {
  double q = -minkowski(v, v);
  if (!(q > 0.0)) throw GeometryError("vector is not timelike");
  Vec3 c = v / std::sqrt(q);
  if (c.z() < 0.0) c = -c;
  // Recompute z from (x, y) so that Q(p,p) = -1 holds to rounding.
  c.z() = std::sqrt(1.0 + c.x() * c.x() + c.y() * c.y());
  return HPoint(c);
}

HPoint HPoint::from_klein(const Vec2& k) {
  double r2 = k.squaredNorm();
  if (!(r2 < 1.0)) throw GeometryError("point outside the Klein disk");
  double z = 1.0 / std::sqrt(1.0 - r2);
  return HPoint(Vec3(k.x() * z, k.y() * z, z));
}

HPoint HPoint::from_poincare(const Vec2& w) {
  double r2 = w.squaredNorm();
  if (!(r2 < 1.0)) throw GeometryError("point outside the Poincare disk");
  double d = 1.0 - r2;
  return HPoint(Vec3(2.0 * w.x() / d, 2.0 * w.y() / d, (1.0 + r2) / d));
}

HPoint HPoint::polar(double r, double theta) {
  double s = std::sinh(r);
  return HPoint(Vec3(s * std::cos(theta), s * std::sin(theta), std::cosh(r)));
}

HGeodesic::HGeodesic(const Vec3& n) {
  double q = minkowski(n, n);
  if (!(q > 0.0)) throw GeometryError("normal is not spacelike");
  n_ = n / std::sqrt(q);
}

HIsometry HIsometry::inverse() const {
  const Mat3& j = minkowski_metric();
  return HIsometry(j * m_.transpose() * j, orientation_);
}

HIsometry HIsometry::reorthonormalized() const {
  // The columns of an isometry are Q-orthonormal with signature (+,+,-).
  // Orthonormalize starting from the timelike column.
  Vec3 e2 = m_.col(2);
  e2 /= std::sqrt(-minkowski(e2, e2));
  if (e2.z() < 0.0) e2 = -e2;
  Vec3 e0 = m_.col(0);
  e0 += minkowski(e0, e2) * e2;
  e0 /= std::sqrt(minkowski(e0, e0));
  Vec3 e1 = m_.col(1);
  e1 += minkowski(e1, e2) * e2;
  e1 -= minkowski(e1, e0) * e0;
  e1 /= std::sqrt(minkowski(e1, e1));
  Mat3 m;
  m.col(0) = e0;
  m.col(1) = e1;
  m.col(2) = e2;
  return HIsometry(m, orientation_);
}

double HIsometry::lorentz_defect() const {
  const Mat3& j = minkowski_metric();
  return (m_.transpose() * j * m_ - j).cwiseAbs().maxCoeff();
}

void IsometryChain::push(const HIsometry& g) {
  acc_ = acc_ * g;
  if (++since_reortho_ >= kReorthoCadence) {
    acc_ = acc_.reorthonormalized();
    since_reortho_ = 0;
  }
}

std::string to_string(Intersection::Kind kind) {
  switch (kind) {
    case Intersection::Kind::Point: return "point";
    case Intersection::Kind::Disjoint: return "disjoint";
    case Intersection::Kind::Asymptotic: return "asymptotic";
    case Intersection::Kind::Equal: return "equal";
  }
  return "?";
}

double distance(const HPoint& p, const HPoint& q) {
  double c = -minkowski(p.coords(), q.coords());
  if (c < 1.0 + 1e-7) {
    // acosh loses half the digits near 1; use the chord length instead.
    Vec3 d = p.coords() - q.coords();
    double s = std::sqrt(std::max(0.0, minkowski(d, d)));
    return 2.0 * std::asinh(0.5 * s);
  }
  return std::acosh(c);
}

HGeodesic geodesic_through(const HPoint& p, const HPoint& q) {
  if (distance(p, q) <= kCoincidenceTol) throw CoincidentPoints();
  return HGeodesic(jmul(p.coords().cross(q.coords())));
}

HIsometry reflect(const HGeodesic& g) {
  const Vec3& n = g.normal();
  Mat3 m = Mat3::Identity() - 2.0 * n * jmul(n).transpose();
  return HIsometry(m, -1);
}

HIsometry boost_to(const HPoint& p) {
  double x = p.x(), y = p.y(), z = p.z();
  double w = 1.0 + z;
  Mat3 m;
  m << 1.0 + x * x / w, x * y / w, x,
       x * y / w, 1.0 + y * y / w, y,
       x, y, z;
  return HIsometry(m, 1);
}

HIsometry rotation_origin(double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  Mat3 m;
  m << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return HIsometry(m, 1);
}

HIsometry rotation(const HPoint& center, double angle) {
  HIsometry t = boost_to(center);
  return t * rotation_origin(angle) * t.inverse();
}

HIsometry translation_x(double length) {
  double c = std::cosh(length), s = std::sinh(length);
  Mat3 m;
  m << c, 0.0, s,
       0.0, 1.0, 0.0,
       s, 0.0, c;
  return HIsometry(m, 1);
}

double angle_at(const HGeodesic& g1, const HGeodesic& g2, const HPoint& at) {
  if (!g1.contains(at) || !g2.contains(at)) throw NotConcurrent("point is not on both geodesics");
  double c = minkowski(g1.normal(), g2.normal());
  if (std::abs(std::abs(c) - 1.0) < kInvariantTol) throw NotConcurrent("identical lines have no angle");
  return std::acos(std::clamp(c, -1.0, 1.0));
}

KleinChord to_klein_line(const HGeodesic& g) {
  const Vec3& n = g.normal();
  double r2 = n.x() * n.x() + n.y() * n.y();
  double r = std::sqrt(r2);
  Vec2 foot = n.z() / r2 * Vec2(n.x(), n.y());
  double h = std::sqrt(std::max(0.0, 1.0 - foot.squaredNorm()));
  Vec2 dir(n.y() / r, -n.x() / r);
  // Walking along `dir` the positive side is on the left, so `dir` points forward.
  Vec2 a = foot - h * dir;
  Vec2 b = foot + h * dir;
  return {a / std::max(1.0, a.norm()), b / std::max(1.0, b.norm())};
}

Intersection intersect(const HGeodesic& g1, const HGeodesic& g2) {
  const Vec3& n1 = g1.normal();
  const Vec3& n2 = g2.normal();
  if ((n1 - n2).norm() < kInvariantTol * (1.0 + n1.norm()) ||
      (n1 + n2).norm() < kInvariantTol * (1.0 + n1.norm())) {
    return {Intersection::Kind::Equal, std::nullopt};
  }
  KleinChord c1 = to_klein_line(g1), c2 = to_klein_line(g2);
  for (const Vec2& u : {c1.a, c1.b}) {
    for (const Vec2& v : {c2.a, c2.b}) {
      if ((u - v).norm() < kInvariantTol) return {Intersection::Kind::Asymptotic, std::nullopt};
    }
  }
  Vec3 p = jmul(n1).cross(jmul(n2));
  if (minkowski(p, p) < 0.0) return {Intersection::Kind::Point, HPoint::from_coords(p)};
  return {Intersection::Kind::Disjoint, std::nullopt};
}

Vec2 to_klein(const HPoint& p) { return Vec2(p.x() / p.z(), p.y() / p.z()); }

Vec2 to_poincare(const HPoint& p) { return Vec2(p.x(), p.y()) / (1.0 + p.z()); }

HPoint from_klein(const Vec2& k) { return HPoint::from_klein(k); }

Vec3 normalize_tangent(const HPoint& p, const Vec3& v) {
  Vec3 w = v + minkowski(v, p.coords()) * p.coords();
  double q = minkowski(w, w);
  if (!(q > 0.0)) throw GeometryError("degenerate tangent vector");
  return w / std::sqrt(q);
}

Vec3 unit_tangent(const HPoint& p, const HPoint& q) {
  if (distance(p, q) <= kCoincidenceTol) throw CoincidentPoints();
  return normalize_tangent(p, q.coords());
}

Vec3 tangent_at(const HPoint& p, double theta) {
  return boost_to(p).apply_vector(Vec3(std::cos(theta), std::sin(theta), 0.0));
}

HPoint point_along(const HPoint& p, const Vec3& v, double t) {
  return HPoint::from_coords(std::cosh(t) * p.coords() + std::sinh(t) * v);
}

Vec3 tangent_along(const HPoint& p, const Vec3& v, double t) {
  return std::sinh(t) * p.coords() + std::cosh(t) * v;
}

HPoint project_onto(const HGeodesic& g, const HPoint& p) {
  return HPoint::from_coords(p.coords() - g.side(p) * g.normal());
}

}  // namespace hypb
