#include "hypbill/billiards.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hypb {

std::string format_word(const BounceWord& w) {
  std::ostringstream os;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) os << ',';
    os << w[i];
  }
  return os.str();
}

BounceWord parse_word(const std::string& s) {
  BounceWord w;
  std::string tok;
  std::istringstream is(s);
  while (std::getline(is, tok, ',')) {
    size_t a = tok.find_first_not_of(" \t");
    size_t b = tok.find_last_not_of(" \t");
    if (a == std::string::npos) {
      if (s.empty()) break;
      throw std::invalid_argument("empty label in word \"" + s + "\"");
    }
    tok = tok.substr(a, b - a + 1);
    size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size() || v <= 0) throw std::invalid_argument("bad label \"" + tok + "\"");
    w.push_back(v);
  }
  return w;
}

BounceWord reversed(const BounceWord& w) { return BounceWord(w.rbegin(), w.rend()); }

namespace {

struct Hit {
  int side = -1;
  double s = std::numeric_limits<double>::infinity();
  HPoint point;
};

// Klein parameter of x along the chord a -> b.
double chord_param(const Vec2& a, const Vec2& b, const Vec2& x) {
  Vec2 d = b - a;
  return (x - a).dot(d) / d.squaredNorm();
}

}  // namespace

Trajectory simulate(const LabeledPolygon& poly, const HPoint& start, const Vec3& tangent, int bounces) {
  if (bounces < 1) throw GeometryError("bounces must be at least 1");
  if (!poly.contains(start) || poly.boundary_distance(start) <= kVertexEps) throw NotInterior();
  Trajectory tr;
  tr.start = start;
  tr.start_tangent = normalize_tangent(start, tangent);
  tr.direction = point_along(start, tr.start_tangent, 1e-3);

  const int n = poly.size();
  HPoint p = start;
  Vec3 t = tr.start_tangent;
  int current = -1;
  double time = 0.0;
  for (int step = 1; step <= bounces; ++step) {
    Hit best;
    for (int s = 0; s < n; ++s) {
      if (s == current) continue;
      const Vec3& nrm = poly.side(s).normal();
      double qp = minkowski(p.coords(), nrm);
      double qt = minkowski(t, nrm);
      if (qt == 0.0) continue;
      double th = -qp / qt;
      if (!(th > 0.0 && th < 1.0)) continue;
      double sp = std::atanh(th);
      if (sp <= 1e-10 || sp >= best.s) continue;
      HPoint x = point_along(p, t, sp);
      auto [a, b] = poly.side_segment(s);
      double lam = chord_param(to_klein(a), to_klein(b), to_klein(x));
      if (lam < -1e-12 || lam > 1.0 + 1e-12) continue;
      best.side = s;
      best.s = sp;
      best.point = x;
    }
    if (best.side < 0) throw GeometryError("trajectory left the polygon");
    auto [a, b] = poly.side_segment(best.side);
    if (distance(best.point, a) <= kVertexEps || distance(best.point, b) <= kVertexEps) {
      tr.vertex_hit = true;
      tr.vertex_hit_step = step;
      break;
    }
    const HGeodesic& line = poly.side(best.side);
    BounceEvent ev;
    ev.side_label = best.side + 1;
    Vec3 tin = tangent_along(p, t, best.s);
    ev.hit_point = project_onto(line, best.point);
    tin = normalize_tangent(ev.hit_point, tin);
    Vec3 tout = normalize_tangent(ev.hit_point, reflect(line).apply_vector(tin));
    ev.incoming = tin;
    ev.outgoing = tout;
    double len = poly.side_length(best.side);
    ev.arc_param = distance(a, ev.hit_point) / len;
    time += best.s;
    ev.time = time;
    tr.events.push_back(ev);
    p = ev.hit_point;
    t = tout;
    current = best.side;
  }
  tr.end_point = p;
  tr.end_tangent = t;
  return tr;
}

Trajectory simulate_angle(const LabeledPolygon& poly, const HPoint& start, double theta, int bounces) {
  return simulate(poly, start, tangent_at(start, theta), bounces);
}

Trajectory simulate_towards(const LabeledPolygon& poly, const HPoint& start, const HPoint& toward, int bounces) {
  return simulate(poly, start, unit_tangent(start, toward), bounces);
}

BounceWord bounce_word(const Trajectory& traj) {
  BounceWord w;
  for (const auto& e : traj.events) w.push_back(e.side_label);
  return w;
}

PeriodicSeed common_perpendicular(const LabeledPolygon& poly, int i, int j) {
  const int n = poly.size();
  if (i < 1 || i > n || j < 1 || j > n) throw GeometryError("side label out of range");
  if (i == j) throw NotUltraparallel("sides coincide");
  int si = i - 1, sj = j - 1;
  if (poly.wrap(si + 1) == sj || poly.wrap(sj + 1) == si) throw NotUltraparallel("sides are adjacent");
  const HGeodesic& gi = poly.side(si);
  const HGeodesic& gj = poly.side(sj);
  Intersection x = intersect(gi, gj);
  if (x.kind != Intersection::Kind::Disjoint) {
    throw NotUltraparallel("side lines are " + to_string(x.kind) + ", not ultraparallel");
  }
  auto jm = [](const Vec3& v) { return Vec3(v.x(), v.y(), -v.z()); };
  HGeodesic perp(jm(gi.normal().cross(gj.normal())));
  auto foot = [&](const HGeodesic& g) {
    Vec3 q = jm(g.normal()).cross(jm(perp.normal()));
    return HPoint::from_coords(q);
  };
  PeriodicSeed seed{foot(gi), foot(gj), perp, false};
  auto on_open_side = [&](const HPoint& f, int s) {
    auto [a, b] = poly.side_segment(s);
    double da = distance(a, f), db = distance(f, b);
    double len = poly.side_length(s);
    return da > kVertexEps && db > kVertexEps && std::abs(da + db - len) < 1e-9 * (1.0 + len);
  };
  seed.valid = on_open_side(seed.foot_i, si) && on_open_side(seed.foot_j, sj);
  // Orient from foot i to foot j.
  if (distance(seed.foot_i, seed.foot_j) > kCoincidenceTol) seed.line = geodesic_through(seed.foot_i, seed.foot_j);
  return seed;
}

}  // namespace hypb
