#pragma once

#include "hypbill/cone.hpp"
#include "hypbill/rigidity.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace hypb {

using Json = nlohmann::ordered_json;

/// Malformed input: bad JSON, missing fields, out-of-range values.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json read_json_file(const std::string& path);

// Polygon: {"model": "klein"|"poincare", "vertices": [[u,v],...],
//           "angles": [[p,q] | null | "irrational" | radians, ...], "name": ...}
// angles[i] is the angle between sides i+1 and i+2 (at vertex i+1, 0-based).
LabeledPolygon polygon_from_json(const Json& j);
Json polygon_to_json(const LabeledPolygon& poly, const std::string& model = "klein", const std::string& name = "");
LabeledPolygon load_polygon(const std::string& path);

RationalAngle angle_from_json(const Json& j);
Json angle_to_json(const RationalAngle& a);

Json point_json(const HPoint& p);  // Klein coordinates
Json trajectory_to_json(const Trajectory& t);
Json realizability_to_json(const Realizability& r);
Json diagonal_to_json(const DiagonalResult& d);
Json enumeration_to_json(const DiagonalEnumeration& e);
Json tiling_to_json(const TilingResult& t);
Json verdict_to_json(const RigidityVerdict& v);
Json grammar_to_json(const GrammarResult& g);
Json comparison_to_json(const ComparisonReport& r);
Json validation_to_json(const ValidationReport& v);

// Cone data. Angles are [p,q] for p*pi/q or a bare number of radians.
// Indices in cover fibres are 1-based.
PiAngle pi_angle_from_json(const Json& j);
ConeSurfaceData cone_surface_from_json(const Json& j);
OrbifoldSignature orbifold_from_json(const Json& j);
BranchedCoverData cover_from_json(const Json& j);
Json cone_surface_to_json(const ConeSurfaceData& d);
Json cover_report_to_json(const CoverReport& r);
Json bound_to_json(const BoundReport& b);
std::string rational_string(const Rational& r);

}  // namespace hypb
