#pragma once

// Hyperboloid model of the hyperbolic plane.
//
// Points live on the upper sheet {Q(p,p) = -1, z > 0} of the Minkowski form
// Q(p,q) = p.x q.x + p.y q.y - p.z q.z. A geodesic is stored as a spacelike
// unit normal n; its points are {p : Q(p,n) = 0} and its positive side is
// {p : Q(p,n) > 0}. Isometries are 3x3 matrices preserving Q.
//
// All metric computation happens here. The Klein disk is used only for
// incidence tests, where geodesics are straight chords.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

namespace hypb {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kInvariantTol = 1e-9;
inline constexpr double kIncidenceTol = 1e-8;
inline constexpr double kCoincidenceTol = 1e-12;
inline constexpr int kReorthoCadence = 64;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CoincidentPoints : public GeometryError {
 public:
  CoincidentPoints() : GeometryError("points coincide") {}
};

class NotConcurrent : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

double minkowski(const Vec3& a, const Vec3& b);

/// J = diag(1, 1, -1).
const Mat3& minkowski_metric();

class HPoint {
 public:
  HPoint() : c_(0.0, 0.0, 1.0) {}

  /// Projects an arbitrary timelike vector onto the upper sheet.
  static HPoint from_coords(const Vec3& v);
  static HPoint from_coords(double x, double y, double z) { return from_coords(Vec3(x, y, z)); }
  static HPoint from_klein(const Vec2& k);
  static HPoint from_poincare(const Vec2& w);
  static HPoint origin() { return HPoint(); }

  /// Point at hyperbolic distance `r` from the origin in direction `theta`.
  static HPoint polar(double r, double theta);

  const Vec3& coords() const { return c_; }
  double x() const { return c_.x(); }
  double y() const { return c_.y(); }
  double z() const { return c_.z(); }

 private:
  explicit HPoint(const Vec3& c) : c_(c) {}
  Vec3 c_;
};

class HGeodesic {
 public:
  /// Normalizes `n` to Q(n,n) = 1. Throws GeometryError if `n` is not spacelike.
  explicit HGeodesic(const Vec3& n);

  const Vec3& normal() const { return n_; }
  HGeodesic reversed() const { return HGeodesic(-n_, Raw{}); }

  /// Q(p, n); equals sinh of the signed distance from p to the line.
  double side(const HPoint& p) const { return minkowski(p.coords(), n_); }
  double signed_distance(const HPoint& p) const { return std::asinh(side(p)); }
  bool contains(const HPoint& p, double tol = kIncidenceTol) const { return std::abs(side(p)) <= tol; }

 private:
  struct Raw {};
  HGeodesic(const Vec3& n, Raw) : n_(n) {}
  Vec3 n_;
};

class HIsometry {
 public:
  HIsometry() : m_(Mat3::Identity()), orientation_(1) {}
  HIsometry(const Mat3& m, int orientation) : m_(m), orientation_(orientation) {}

  static HIsometry identity() { return HIsometry(); }

  const Mat3& matrix() const { return m_; }
  int orientation() const { return orientation_; }

  HIsometry operator*(const HIsometry& other) const {
    return HIsometry(m_ * other.m_, orientation_ * other.orientation_);
  }
  HIsometry inverse() const;

  HPoint apply(const HPoint& p) const { return HPoint::from_coords(m_ * p.coords()); }
  HGeodesic apply(const HGeodesic& g) const { return HGeodesic(m_ * g.normal()); }
  /// Tangent vectors transform linearly.
  Vec3 apply_vector(const Vec3& v) const { return m_ * v; }

  /// Minkowski Gram-Schmidt on the columns; removes accumulated drift.
  HIsometry reorthonormalized() const;

  /// max |(m^T J m - J)_ij|
  double lorentz_defect() const;

 private:
  Mat3 m_;
  int orientation_;
};

/// Composes isometries left to right, re-orthonormalizing every
/// kReorthoCadence steps.
class IsometryChain {
 public:
  void push(const HIsometry& g);
  const HIsometry& value() const { return acc_; }

 private:
  HIsometry acc_;
  int since_reortho_ = 0;
};

struct KleinChord {
  Vec2 a;
  Vec2 b;
};

struct Intersection {
  enum class Kind { Point, Disjoint, Asymptotic, Equal };
  Kind kind;
  std::optional<HPoint> point;
};

std::string to_string(Intersection::Kind kind);

double distance(const HPoint& p, const HPoint& q);

/// Oriented so that walking p -> q the positive side is on the left.
HGeodesic geodesic_through(const HPoint& p, const HPoint& q);

HIsometry reflect(const HGeodesic& g);

/// Counterclockwise rotation about `center`.
HIsometry rotation(const HPoint& center, double angle);

/// Orientation-preserving isometry taking the origin to `p`, with no rotation
/// part (a pure boost).
HIsometry boost_to(const HPoint& p);

/// Translation by `length` along the x axis through the origin.
HIsometry translation_x(double length);

/// Rotation about the origin.
HIsometry rotation_origin(double angle);

/// Unsigned angle in (0, pi) between the oriented tangent directions of g1
/// and g2 at `at`. Throws NotConcurrent if `at` is off either line or the
/// lines coincide.
double angle_at(const HGeodesic& g1, const HGeodesic& g2, const HPoint& at);

Intersection intersect(const HGeodesic& g1, const HGeodesic& g2);

Vec2 to_klein(const HPoint& p);
Vec2 to_poincare(const HPoint& p);
HPoint from_klein(const Vec2& k);

/// Ideal endpoints of the line, `a` behind and `b` ahead in the direction of
/// travel for which the positive side is on the left.
KleinChord to_klein_line(const HGeodesic& g);

/// Unit tangent at p pointing toward q.
Vec3 unit_tangent(const HPoint& p, const HPoint& q);

/// Unit tangent at p making counterclockwise angle theta with the image of
/// the +x direction under boost_to(p).
Vec3 tangent_at(const HPoint& p, double theta);

/// exp_p(t * v) for a unit tangent v at p.
HPoint point_along(const HPoint& p, const Vec3& v, double t);

/// Tangent of the geodesic through (p, v) after travelling distance t.
Vec3 tangent_along(const HPoint& p, const Vec3& v, double t);

/// Re-projects a tangent vector to be Q-orthogonal to p with Q(v,v) = 1.
Vec3 normalize_tangent(const HPoint& p, const Vec3& v);

/// Foot of the perpendicular from p onto g.
HPoint project_onto(const HGeodesic& g, const HPoint& p);

}  // namespace hypb
