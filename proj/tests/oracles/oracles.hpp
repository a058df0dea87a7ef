#pragma once

// Independent reference computations for tests. Nothing here calls the
// library's metric code: points are handled as Poincare-disk complex numbers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace oracle {

using C = std::complex<double>;

inline double disk_distance(C a, C b) {
  double num = 2.0 * std::norm(a - b);
  double den = (1.0 - std::norm(a)) * (1.0 - std::norm(b));
  return std::acosh(1.0 + num / den);
}

// Reflection of the disk in the geodesic through a and b: inversion in the
// orthogonal circle, or a Euclidean mirror when the line passes through 0.
struct Mirror {
  bool straight = false;
  C centre;
  double r2 = 0.0;
  C dir;  // unit direction when straight

  C operator()(C z) const {
    if (straight) return dir * dir * std::conj(z);
    return centre + r2 / std::conj(z - centre);
  }
};

inline Mirror mirror_through(C a, C b) {
  Mirror m;
  double det = a.real() * b.imag() - a.imag() * b.real();
  if (std::abs(det) < 1e-14) {
    m.straight = true;
    C d = std::abs(a) > std::abs(b) ? a : b;
    m.dir = d / std::abs(d);
    return m;
  }
  double ra = (std::norm(a) + 1.0) / 2.0, rb = (std::norm(b) + 1.0) / 2.0;
  m.centre = C((ra * b.imag() - rb * a.imag()) / det, (a.real() * rb - b.real() * ra) / det);
  m.r2 = std::norm(m.centre) - 1.0;
  return m;
}

inline C to_klein(C w) { return 2.0 * w / (1.0 + std::norm(w)); }
inline C from_klein(C k) { return k / (1.0 + std::sqrt(std::max(0.0, 1.0 - std::norm(k)))); }

// Interior angle at b of triangle abc from side lengths (law of cosines).
inline double triangle_angle(double opposite, double s1, double s2) {
  double c = (std::cosh(s1) * std::cosh(s2) - std::cosh(opposite)) / (std::sinh(s1) * std::sinh(s2));
  return std::acos(std::clamp(c, -1.0, 1.0));
}

// Area of a convex polygon (Poincare vertices) by fanning from vertex 0.
inline double fan_area(const std::vector<C>& v) {
  double a = 0.0;
  for (size_t i = 1; i + 1 < v.size(); ++i) {
    double x = disk_distance(v[0], v[i]), y = disk_distance(v[i], v[i + 1]), z = disk_distance(v[0], v[i + 1]);
    double A = triangle_angle(y, x, z), B = triangle_angle(z, x, y), G = triangle_angle(x, y, z);
    a += M_PI - A - B - G;
  }
  return a;
}

// Interior angle at v[i] of a convex polygon, from side lengths only.
inline double polygon_angle(const std::vector<C>& v, size_t i) {
  size_t n = v.size();
  C p = v[(i + n - 1) % n], q = v[i], r = v[(i + 1) % n];
  return triangle_angle(disk_distance(p, r), disk_distance(p, q), disk_distance(q, r));
}

struct GridVerdict {
  bool feasible = false;
  double best = -std::numeric_limits<double>::infinity();  // normalised Klein slack
};

// Gates of the unfolded corridor in Klein coordinates, left endpoint first.
// Polygon vertices in the Poincare disk, counterclockwise; labels 1-based.
inline void corridor_gates(const std::vector<C>& poly, const std::vector<int>& word, std::vector<C>& left,
                           std::vector<C>& right) {
  const size_t n = poly.size();
  std::vector<C> copy = poly;
  bool reversed = false;
  for (int b : word) {
    C v0 = copy[(b - 1) % n], v1 = copy[b % n];
    left.push_back(to_klein(reversed ? v0 : v1));
    right.push_back(to_klein(reversed ? v1 : v0));
    Mirror m = mirror_through(v0, v1);
    for (auto& z : copy) z = m(z);
    reversed = !reversed;
  }
}

// Slack of the best line with direction angle theta: lines a x + b y + c = 0
// with (a, b) = (cos, sin) must put each left endpoint on the positive side
// and each right endpoint on the negative side, crossing gates in order.
inline double slack_at(const std::vector<C>& left, const std::vector<C>& right, double theta) {
  double a = std::cos(theta), b = std::sin(theta);
  double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < left.size(); ++k) {
    lo = std::max(lo, -(a * left[k].real() + b * left[k].imag()));
    hi = std::min(hi, -(a * right[k].real() + b * right[k].imag()));
  }
  double c = 0.5 * (lo + hi);
  double slack = 0.5 * (hi - lo);
  if (!(slack > 0)) return slack;
  // The chord must meet each gate inside the disk and in order.
  C d(b, -a);
  double prev = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < left.size(); ++k) {
    double fl = a * left[k].real() + b * left[k].imag() + c;
    double fr = a * right[k].real() + b * right[k].imag() + c;
    C x = left[k] + (fl / (fl - fr)) * (right[k] - left[k]);
    double t = x.real() * d.real() + x.imag() * d.imag();
    if (!(t > prev)) return -std::abs(t - prev);
    prev = t;
  }
  return slack;
}

// Grid over directions, then golden-section refinement around the best cells.
inline GridVerdict grid_realizable(const std::vector<C>& poly, const std::vector<int>& word, int directions = 10000) {
  GridVerdict out;
  std::vector<C> left, right;
  corridor_gates(poly, word, left, right);
  if (word.empty()) {
    out.feasible = true;
    out.best = 1.0;
    return out;
  }
  const double step = 2.0 * M_PI / directions;
  std::vector<std::pair<double, int>> scored;
  for (int i = 0; i < directions; ++i) scored.push_back({slack_at(left, right, i * step), i});
  std::partial_sort(scored.begin(), scored.begin() + std::min<size_t>(8, scored.size()), scored.end(),
                    [](auto& x, auto& y) { return x.first > y.first; });
  out.best = scored.front().first;
  for (size_t s = 0; s < std::min<size_t>(8, scored.size()); ++s) {
    double lo = (scored[s].second - 1) * step, hi = (scored[s].second + 1) * step;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = slack_at(left, right, x1), f2 = slack_at(left, right, x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      if (f1 > f2) {
        hi = x2, x2 = x1, f2 = f1, x1 = hi - g * (hi - lo), f1 = slack_at(left, right, x1);
      } else {
        lo = x1, x1 = x2, f1 = f2, x2 = lo + g * (hi - lo), f2 = slack_at(left, right, x2);
      }
    }
    out.best = std::max({out.best, f1, f2});
  }
  out.feasible = out.best > 0;
  return out;
}

}  // namespace oracle
