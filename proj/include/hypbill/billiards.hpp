#pragma once

#include "hypbill/polygon.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hypb {

inline constexpr double kVertexEps = 1e-8;

/// Labels are 1-based.
using BounceWord = std::vector<int>;

std::string format_word(const BounceWord& w);
/// Parses "1,3,1,3". Throws std::invalid_argument on malformed input.
BounceWord parse_word(const std::string& s);
BounceWord reversed(const BounceWord& w);

struct BounceEvent {
  int side_label = 0;
  HPoint hit_point;
  /// Fraction of the side's length from vertex side_label to the hit.
  double arc_param = 0.0;
  double time = 0.0;
  Vec3 incoming;
  Vec3 outgoing;
};

struct Trajectory {
  HPoint start;
  /// Point 1e-3 along the initial direction.
  HPoint direction;
  Vec3 start_tangent;
  std::vector<BounceEvent> events;
  /// Set when the orbit ran into a vertex; events then stop before that step.
  bool vertex_hit = false;
  int vertex_hit_step = 0;
  /// Position and unit tangent after the last event.
  HPoint end_point;
  Vec3 end_tangent;
};

class NotInterior : public GeometryError {
 public:
  NotInterior() : GeometryError("start point is not strictly inside the polygon") {}
};

class NotUltraparallel : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// `tangent` is any tangent vector at `start`; it is normalized.
Trajectory simulate(const LabeledPolygon& poly, const HPoint& start, const Vec3& tangent, int bounces);
/// Direction given as the counterclockwise angle theta in the frame boost_to(start).
Trajectory simulate_angle(const LabeledPolygon& poly, const HPoint& start, double theta, int bounces);
/// Direction given by a second point on the initial geodesic.
Trajectory simulate_towards(const LabeledPolygon& poly, const HPoint& start, const HPoint& toward, int bounces);

BounceWord bounce_word(const Trajectory& traj);

struct PeriodicSeed {
  HPoint foot_i;
  HPoint foot_j;
  HGeodesic line;
  bool valid = false;
};

/// Common perpendicular of the lines of sides i and j (1-based labels).
PeriodicSeed common_perpendicular(const LabeledPolygon& poly, int i, int j);

}  // namespace hypb
