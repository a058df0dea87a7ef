#pragma once

#include "hypbill/cone.hpp"
#include "hypbill/rigidity.hpp"
#include "oracles/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

namespace testing_support {

using namespace hypb;

inline const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

inline LabeledPolygon pentagon(long q, double l1, double l2) {
  DeformationParams p;
  p.target_angles.assign(5, RationalAngle::fraction(1, q));
  p.free_lengths = {l1, l2};
  return solve_closure(p);
}

inline LabeledPolygon right_pentagon(double l1 = 0.9, double l2 = 1.2) { return pentagon(2, l1, l2); }

inline LabeledPolygon triangle_2_3_7() {
  DeformationParams p;
  p.target_angles = {RationalAngle::fraction(1, 2), RationalAngle::fraction(1, 3), RationalAngle::fraction(1, 7)};
  return solve_closure(p);
}

inline LabeledPolygon irrational_quad() {
  DeformationParams p;
  p.target_angles = {RationalAngle::irrational(1.0), RationalAngle::fraction(1, 3), RationalAngle::fraction(1, 3),
                     RationalAngle::fraction(1, 3)};
  p.free_lengths = {1.2};
  return solve_closure(p);
}

inline std::vector<oracle::C> disk_vertices(const LabeledPolygon& poly) {
  std::vector<oracle::C> out;
  for (const auto& v : poly.vertices()) {
    Vec2 w = to_poincare(v);
    out.emplace_back(w.x(), w.y());
  }
  return out;
}

inline HPoint random_point(std::mt19937_64& rng, double radius = 3.0) {
  std::uniform_real_distribution<double> r(0.0, radius), t(0.0, 2.0 * M_PI);
  return HPoint::polar(r(rng), t(rng));
}

inline HGeodesic random_geodesic(std::mt19937_64& rng) {
  HPoint a = random_point(rng), b = random_point(rng);
  while (distance(a, b) < 1e-3) b = random_point(rng);
  return geodesic_through(a, b);
}

inline HIsometry random_isometry(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> t(0.0, 2.0 * M_PI);
  HIsometry g = boost_to(random_point(rng)) * rotation_origin(t(rng));
  if (rng() % 2) g = g * reflect(HGeodesic(Vec3(1, 0, 0)));
  return g;
}

// Random non-grazing trajectory from a random interior start.
inline bool random_run(const LabeledPolygon& poly, std::mt19937_64& rng, int bounces, Trajectory& out) {
  HPoint start;
  double theta = 0.0;
  if (!sample_start(poly, rng, start, theta)) return false;
  out = simulate_angle(poly, start, theta, bounces);
  return !out.vertex_hit;
}

// A small library of convex test polygons, good and otherwise.
inline std::vector<LabeledPolygon> polygon_zoo() {
  std::vector<LabeledPolygon> z;
  z.push_back(right_pentagon());
  z.push_back(right_pentagon(1.3, 0.8));
  z.push_back(pentagon(3, 2.0, 2.3));
  z.push_back(pentagon(3, 2.2, 2.5));
  z.push_back(triangle_2_3_7());
  z.push_back(build_regular(6, RationalAngle::fraction(1, 2)));
  z.push_back(build_regular(8, RationalAngle::fraction(1, 4)));
  z.push_back(build_regular(7, RationalAngle::radians(1.7)));
  return z;
}

// Random cover data consistent with every local check; genus solved from the
// area identity and kept only when integral.
inline std::optional<BranchedCoverData> random_cover(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % (hi - lo + 1)); };
  BranchedCoverData c;
  c.orbifold.genus = pick(0, 2);
  int m = pick(c.orbifold.genus == 0 ? 3 : 1, 5);
  for (int i = 0; i < m; ++i) c.orbifold.orders.push_back(pick(2, 8));
  if (!is_hyperbolic(c.orbifold)) return std::nullopt;
  c.degree = pick(2, 12);
  Rational theta_sum = 0;
  int k = 0;
  for (int i = 0; i < m; ++i) {
    int b = c.orbifold.orders[i];
    CoverFibre f{i, {}};
    int left = c.degree;
    if (b % 2 == 0) {
      int cones = pick(0, 2);
      // Cone angle above 2pi needs local degree above b.
      const int lo = std::max(3, b + 1);
      for (int j = 0; j < cones && left >= lo; ++j) {
        int ld = pick(lo, left);
        f.preimages.push_back({k++, ld});
        c.surface.cone_angles.push_back(PiAngle::fraction(2LL * ld, b));
        theta_sum += Rational(2LL * ld, b);
        left -= ld;
      }
    }
    if (left % b != 0) return std::nullopt;
    for (int j = 0; j < left / b; ++j) f.preimages.push_back({-1, b});
    c.fibres.push_back(f);
  }
  if (k == 0) return std::nullopt;
  // 4 (g - 1) + 2 k - sum theta / pi = d * area(O) / pi
  Rational four_g = Rational(c.degree) * orbifold_area_over_pi(c.orbifold) + theta_sum - 2 * k + 4;
  if (four_g.denominator() != 1 || four_g.numerator() % 4 != 0 || four_g < 0) return std::nullopt;
  c.surface.genus = static_cast<int>(four_g.numerator() / 4);
  return c;
}

}  // namespace testing_support
