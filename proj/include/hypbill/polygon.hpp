#pragma once

#include "hypbill/kernel.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hypb {

inline constexpr long kAngleQMax = 1000;
inline constexpr double kAngleFitTol = 1e-9;
inline constexpr double kAngleCheckTol = 1e-8;

enum class AngleClass { EvenSubmultiple, OddSubmultiple, RationalOther, Irrational };
std::string to_string(AngleClass c);

/// An interior angle, optionally declared as an exact rational multiple p*pi/q.
class RationalAngle {
 public:
  RationalAngle() = default;

  /// p*pi/q, reduced to lowest terms.
  static RationalAngle fraction(long p, long q);
  /// Numeric angle; classification reconstructs (p, q) by continued fractions.
  static RationalAngle radians(double value);
  /// Numeric angle declared to be an irrational multiple of pi.
  static RationalAngle irrational(double value);

  double value() const { return value_; }
  const std::optional<std::pair<long, long>>& declared() const { return declared_; }
  bool declared_irrational() const { return irrational_; }

  /// Declared (p, q), or the reconstruction with q <= kAngleQMax, or nothing.
  std::optional<std::pair<long, long>> rational() const;
  AngleClass classify() const;
  /// q when the angle is pi/q, otherwise 0.
  long submultiple() const;

 private:
  double value_ = 0.0;
  std::optional<std::pair<long, long>> declared_;
  bool irrational_ = false;
};

/// Best rational approximation p/q of x with q <= qmax, if within tol.
std::optional<std::pair<long, long>> reconstruct_fraction(double x, long qmax = kAngleQMax,
                                                          double tol = kAngleFitTol);

class InfeasibleParams : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class AngleSumViolation : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class NoConvergence : public GeometryError {
 public:
  NoConvergence(int iterations, double residual);
  int iterations;
  double residual;
};

/// Compact polygon with sides labelled 1..n counterclockwise. Side i joins
/// vertex i to vertex i+1; angle i is the interior angle between sides i and
/// i+1, located at vertex i+1. Accessors below take 0-based indices.
class LabeledPolygon {
 public:
  /// Angles are measured from the vertices. `declared` (if non-empty) replaces
  /// the measured values; validate() checks that they agree.
  LabeledPolygon(std::vector<HPoint> vertices, std::vector<RationalAngle> declared = {});

  int size() const { return static_cast<int>(vertices_.size()); }
  const std::vector<HPoint>& vertices() const { return vertices_; }
  const HPoint& vertex(int i) const { return vertices_[wrap(i)]; }
  /// Line of side s, oriented so that the interior is on its positive side
  /// near the side.
  const HGeodesic& side(int s) const { return sides_[wrap(s)]; }
  const std::vector<RationalAngle>& angles() const { return angles_; }
  const RationalAngle& angle(int s) const { return angles_[wrap(s)]; }
  /// Angle s measured from the vertex positions.
  double measured_angle(int s) const { return measured_[wrap(s)]; }
  double side_length(int s) const;
  /// Endpoints of side s as (vertex s, vertex s+1).
  std::pair<HPoint, HPoint> side_segment(int s) const { return {vertex(s), vertex(s + 1)}; }

  bool is_convex() const;
  bool contains(const HPoint& p) const;
  /// Minimum hyperbolic distance from p to the boundary.
  double boundary_distance(const HPoint& p) const;
  /// A point well inside the polygon.
  HPoint interior_point() const;
  double diameter() const;

  /// Relabels so that old side s becomes side s - shift.
  LabeledPolygon relabeled(int shift) const;
  LabeledPolygon transformed(const HIsometry& g) const;

  int wrap(int i) const {
    int n = size();
    return ((i % n) + n) % n;
  }

 private:
  std::vector<HPoint> vertices_;
  std::vector<HGeodesic> sides_;
  std::vector<RationalAngle> angles_;
  std::vector<double> measured_;
};

struct ValidationReport {
  bool simple = true;
  bool counterclockwise = true;
  bool angle_sum = true;
  bool angle_consistency = true;
  std::vector<std::string> failures;
  bool ok() const { return simple && counterclockwise && angle_sum && angle_consistency; }
};

/// Checks the raw vertex list. Never throws.
ValidationReport validate_vertices(const std::vector<HPoint>& vertices,
                                   const std::vector<RationalAngle>& declared = {});
ValidationReport validate(const LabeledPolygon& poly);

double area(const LabeledPolygon& poly);

LabeledPolygon build_regular(int n, const RationalAngle& interior_angle);

struct DeformationParams {
  std::vector<RationalAngle> target_angles;
  std::vector<double> free_lengths;
  /// 0-based sides carrying the free lengths; default: sides 0..n-4.
  std::vector<int> free_sides;
  std::vector<double> solved_lengths;
};

struct ClosureInfo {
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> lengths;
};

/// Boundary holonomy T(L_0) Rot(pi - a_0) ... T(L_{n-1}) Rot(pi - a_{n-1}).
HIsometry boundary_holonomy(const std::vector<double>& lengths, const std::vector<double>& angles);

/// Polygon from side lengths and angles by walking the boundary. The result
/// is recentred so its vertex barycentre sits at the origin.
LabeledPolygon polygon_from_lengths(const std::vector<double>& lengths,
                                    const std::vector<RationalAngle>& angles);

LabeledPolygon solve_closure(DeformationParams& params, const LabeledPolygon* seed = nullptr,
                             ClosureInfo* info = nullptr);

enum class AngleSummary { AllEvenSubmultiple, NoneEvenSubmultiple, Mixed, HasIrrational };
std::string to_string(AngleSummary s);

struct AngleClassification {
  std::vector<AngleClass> per_angle;
  AngleSummary summary;
};

AngleClassification classify_angles(const LabeledPolygon& poly);

/// Every angle is pi/k for an integer k.
bool is_good(const LabeledPolygon& poly);

/// Max vertex distance after the best orientation-preserving isometry that
/// keeps labels fixed.
double aligned_distance(const LabeledPolygon& a, const LabeledPolygon& b);

}  // namespace hypb
