#pragma once

#include "hypbill/polygon.hpp"

#include <boost/rational.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypb {

using Rational = boost::rational<long long>;

/// An angle stored as an exact multiple of pi when known.
struct PiAngle {
  std::optional<Rational> multiple;
  double radians = 0.0;

  static PiAngle fraction(long long p, long long q);
  static PiAngle numeric(double radians);
};

class InvalidData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotHyperbolic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConeSurfaceData {
  int genus = 0;
  std::vector<PiAngle> cone_angles;
};

/// 4 pi (g - 1) + 2 pi n - sum theta. Throws InvalidData unless positive.
double cone_area(const ConeSurfaceData& data);
/// Area / pi when every angle is exact.
std::optional<Rational> cone_area_over_pi(const ConeSurfaceData& data);

struct OrbifoldSignature {
  int genus = 0;
  std::vector<int> orders;
};

/// 2 (2g - 2 + sum (1 - 1/b)), i.e. area / pi, exact.
Rational orbifold_area_over_pi(const OrbifoldSignature& sig);
bool is_hyperbolic(const OrbifoldSignature& sig);
/// Throws NotHyperbolic when the area is not positive.
double orbifold_area(const OrbifoldSignature& sig);

/// Genus 0 with cone angle 2 alpha at each vertex.
ConeSurfaceData double_of(const LabeledPolygon& poly);

struct CoverPreimage {
  /// Index into surface.cone_angles, or -1 for a regular point.
  int cone_index = -1;
  int local_degree = 1;
};

struct CoverFibre {
  int orbifold_point = 0;  // index into orbifold.orders
  std::vector<CoverPreimage> preimages;
};

struct BranchedCoverData {
  ConeSurfaceData surface;
  OrbifoldSignature orbifold;
  int degree = 0;
  std::vector<CoverFibre> fibres;
};

struct CoverReport {
  bool valid = true;
  std::vector<std::string> failures;
  double surface_area = 0.0;
  double orbifold_area = 0.0;
};

CoverReport validate_cover(const BranchedCoverData& data);

struct BoundReport {
  int k = 0;
  int r = 0;
  int genus = 0;
  double bound = 0.0;  // 32 (g - 1)
  double rhs = 0.0;    // 4 r pi (g - 1) / (3 Area(O))
  bool holds = false;
  bool rhs_within_bound = false;
};

/// Throws InvalidData if the cover does not validate.
BoundReport bound_check(const BranchedCoverData& data);

}  // namespace hypb
