#include "hypbill/polygon.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hypb {

namespace {

constexpr double kPi = M_PI;

double wrap_2pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

// Counterclockwise angle at `v` from the direction towards `next` to the
// direction towards `prev`.
double corner_angle(const HPoint& prev, const HPoint& v, const HPoint& next) {
  HIsometry t = boost_to(v).inverse();
  Vec3 a = t.apply(prev).coords();
  Vec3 b = t.apply(next).coords();
  return wrap_2pi(std::atan2(a.y(), a.x()) - std::atan2(b.y(), b.x()));
}

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Closed-segment intersection test in the plane.
bool segments_touch(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double eps = 1e-14;
  double d1 = cross2(q2 - q1, p1 - q1);
  double d2 = cross2(q2 - q1, p2 - q1);
  double d3 = cross2(p2 - p1, q1 - p1);
  double d4 = cross2(p2 - p1, q2 - p1);
  if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
      ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))) {
    return true;
  }
  auto on_seg = [&](const Vec2& a, const Vec2& b, const Vec2& c, double d) {
    if (std::abs(d) > eps) return false;
    return std::min(a.x(), b.x()) - eps <= c.x() && c.x() <= std::max(a.x(), b.x()) + eps &&
           std::min(a.y(), b.y()) - eps <= c.y() && c.y() <= std::max(a.y(), b.y()) + eps;
  };
  return on_seg(q1, q2, p1, d1) || on_seg(q1, q2, p2, d2) || on_seg(p1, p2, q1, d3) ||
         on_seg(p1, p2, q2, d4);
}

std::vector<Vec2> klein_ring(const std::vector<HPoint>& vs) {
  std::vector<Vec2> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(to_klein(v));
  return out;
}

double signed_area(const std::vector<Vec2>& ring) {
  double s = 0.0;
  for (size_t i = 0; i < ring.size(); ++i) s += cross2(ring[i], ring[(i + 1) % ring.size()]);
  return 0.5 * s;
}

// Frame at vertex i: origin -> v_i with +x towards v_{i+1}.
HIsometry vertex_frame(const LabeledPolygon& p, int i) {
  HIsometry t = boost_to(p.vertex(i));
  Vec3 w = t.inverse().apply(p.vertex(i + 1)).coords();
  return t * rotation_origin(std::atan2(w.y(), w.x()));
}

}  // namespace

std::string to_string(AngleClass c) {
  switch (c) {
    case AngleClass::EvenSubmultiple: return "even_submultiple";
    case AngleClass::OddSubmultiple: return "odd_submultiple";
    case AngleClass::RationalOther: return "rational_other";
    case AngleClass::Irrational: return "irrational";
  }
  return "?";
}

std::string to_string(AngleSummary s) {
  switch (s) {
    case AngleSummary::AllEvenSubmultiple: return "all_even_submultiple";
    case AngleSummary::NoneEvenSubmultiple: return "none_even_submultiple";
    case AngleSummary::Mixed: return "mixed";
    case AngleSummary::HasIrrational: return "has_irrational";
  }
  return "?";
}

std::optional<std::pair<long, long>> reconstruct_fraction(double x, long qmax, double tol) {
  if (!(x > 0.0) || !std::isfinite(x)) return std::nullopt;
  // Convergents p_k/q_k of the continued fraction of x.
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(r);
    if (a > 1e12) break;
    long ai = static_cast<long>(a);
    long p2 = ai * p1 + p0;
    long q2 = ai * q1 + q0;
    if (q2 > qmax) break;
    if (std::abs(x - static_cast<double>(p2) / static_cast<double>(q2)) * kPi < tol) return std::make_pair(p2, q2);
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

RationalAngle RationalAngle::fraction(long p, long q) {
  if (p <= 0 || q <= 0) throw GeometryError("angle fraction must be positive");
  long g = std::gcd(p, q);
  RationalAngle a;
  a.declared_ = std::make_pair(p / g, q / g);
  a.value_ = kPi * static_cast<double>(p / g) / static_cast<double>(q / g);
  return a;
}

RationalAngle RationalAngle::radians(double value) {
  RationalAngle a;
  a.value_ = value;
  return a;
}

RationalAngle RationalAngle::irrational(double value) {
  RationalAngle a;
  a.value_ = value;
  a.irrational_ = true;
  return a;
}

std::optional<std::pair<long, long>> RationalAngle::rational() const {
  if (declared_) return declared_;
  if (irrational_) return std::nullopt;
  return reconstruct_fraction(value_ / kPi);
}

AngleClass RationalAngle::classify() const {
  auto r = rational();
  if (!r) return AngleClass::Irrational;
  auto [p, q] = *r;
  if (p != 1) return AngleClass::RationalOther;
  return q % 2 == 0 ? AngleClass::EvenSubmultiple : AngleClass::OddSubmultiple;
}

long RationalAngle::submultiple() const {
  auto r = rational();
  if (!r || r->first != 1) return 0;
  return r->second;
}

NoConvergence::NoConvergence(int it, double res)
    : GeometryError([&] {
        std::ostringstream os;
        os << "closure solver did not converge after " << it << " iterations (residual " << res << ")";
        return os.str();
      }()),
      iterations(it),
      residual(res) {}

LabeledPolygon::LabeledPolygon(std::vector<HPoint> vertices, std::vector<RationalAngle> declared)
    : vertices_(std::move(vertices)) {
  int n = size();
  if (n < 3) throw GeometryError("polygon needs at least 3 vertices");
  if (!declared.empty() && static_cast<int>(declared.size()) != n) {
    throw GeometryError("angle list length does not match vertex count");
  }
  sides_.reserve(n);
  for (int s = 0; s < n; ++s) sides_.push_back(geodesic_through(vertex(s), vertex(s + 1)));
  measured_.resize(n);
  for (int s = 0; s < n; ++s) measured_[s] = corner_angle(vertex(s), vertex(s + 1), vertex(s + 2));
  if (declared.empty()) {
    for (double m : measured_) angles_.push_back(RationalAngle::radians(m));
  } else {
    angles_ = std::move(declared);
  }
}

double LabeledPolygon::side_length(int s) const { return distance(vertex(s), vertex(s + 1)); }

bool LabeledPolygon::is_convex() const {
  for (double a : measured_) {
    if (a >= kPi) return false;
  }
  return true;
}

bool LabeledPolygon::contains(const HPoint& p) const {
  Vec2 q = to_klein(p);
  bool inside = false;
  int n = size();
  for (int i = 0, j = n - 1; i < n; j = i++) {
    Vec2 a = to_klein(vertices_[i]);
    Vec2 b = to_klein(vertices_[j]);
    if ((a.y() > q.y()) != (b.y() > q.y())) {
      double x = (b.x() - a.x()) * (q.y() - a.y()) / (b.y() - a.y()) + a.x();
      if (q.x() < x) inside = !inside;
    }
  }
  return inside;
}

double LabeledPolygon::boundary_distance(const HPoint& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < size(); ++s) {
    const auto& [a, b] = side_segment(s);
    HPoint f = project_onto(side(s), p);
    double len = side_length(s);
    double da = distance(a, f), db = distance(f, b);
    double d;
    if (std::abs(da + db - len) < 1e-9 * (1.0 + len)) {
      d = std::abs(side(s).signed_distance(p));
    } else {
      d = std::min(distance(p, a), distance(p, b));
    }
    best = std::min(best, d);
  }
  return best;
}

HPoint LabeledPolygon::interior_point() const {
  Vec3 sum = Vec3::Zero();
  for (const auto& v : vertices_) sum += v.coords();
  HPoint c = HPoint::from_coords(sum);
  if (is_convex() && contains(c)) return c;
  // Non-convex: coarse search for the deepest point.
  Vec2 lo(1, 1), hi(-1, -1);
  for (const auto& v : vertices_) {
    Vec2 k = to_klein(v);
    lo = lo.cwiseMin(k);
    hi = hi.cwiseMax(k);
  }
  HPoint best = c;
  double best_d = contains(c) ? boundary_distance(c) : -1.0;
  const int grid = 48;
  for (int i = 1; i < grid; ++i) {
    for (int j = 1; j < grid; ++j) {
      Vec2 k(lo.x() + (hi.x() - lo.x()) * i / grid, lo.y() + (hi.y() - lo.y()) * j / grid);
      if (k.squaredNorm() >= 1.0) continue;
      HPoint q = HPoint::from_klein(k);
      if (!contains(q)) continue;
      double d = boundary_distance(q);
      if (d > best_d) {
        best_d = d;
        best = q;
      }
    }
  }
  return best;
}

double LabeledPolygon::diameter() const {
  double d = 0.0;
  for (int i = 0; i < size(); ++i) {
    for (int j = i + 1; j < size(); ++j) d = std::max(d, distance(vertices_[i], vertices_[j]));
  }
  return d;
}

LabeledPolygon LabeledPolygon::relabeled(int shift) const {
  int n = size();
  std::vector<HPoint> vs;
  std::vector<RationalAngle> as;
  for (int i = 0; i < n; ++i) {
    vs.push_back(vertex(i + shift));
    as.push_back(angle(i + shift));
  }
  return LabeledPolygon(std::move(vs), std::move(as));
}

LabeledPolygon LabeledPolygon::transformed(const HIsometry& g) const {
  if (g.orientation() < 0) throw GeometryError("orientation-reversing map would break labelling");
  std::vector<HPoint> vs;
  for (const auto& v : vertices_) vs.push_back(g.apply(v));
  return LabeledPolygon(std::move(vs), angles_);
}

ValidationReport validate_vertices(const std::vector<HPoint>& vertices,
                                   const std::vector<RationalAngle>& declared) {
  ValidationReport rep;
  int n = static_cast<int>(vertices.size());
  if (n < 3) {
    rep.simple = false;
    rep.failures.push_back("fewer than 3 vertices");
    return rep;
  }
  if (!declared.empty() && static_cast<int>(declared.size()) != n) {
    rep.angle_consistency = false;
    rep.failures.push_back("angle list length does not match vertex count");
  }
  auto ring = klein_ring(vertices);
  for (int i = 0; i < n; ++i) {
    if (distance(vertices[i], vertices[(i + 1) % n]) <= kCoincidenceTol) {
      rep.simple = false;
      rep.failures.push_back("repeated vertex " + std::to_string(i + 1));
    }
  }
  if (!rep.simple) return rep;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      const Vec2 &a1 = ring[i], &a2 = ring[(i + 1) % n], &b1 = ring[j], &b2 = ring[(j + 1) % n];
      if (adjacent) {
        // Adjacent sides may only share their common vertex.
        const Vec2& shared = (j == i + 1) ? a2 : a1;
        const Vec2& p = (j == i + 1) ? a1 : a2;
        const Vec2& q = (j == i + 1) ? b2 : b1;
        Vec2 u = p - shared, w = q - shared;
        if (std::abs(cross2(u, w)) < 1e-14 * u.norm() * w.norm() && u.dot(w) > 0.0) {
          rep.simple = false;
          rep.failures.push_back("sides " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " overlap");
        }
        continue;
      }
      if (segments_touch(a1, a2, b1, b2)) {
        rep.simple = false;
        rep.failures.push_back("sides " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " cross");
      }
    }
  }
  if (signed_area(ring) <= 0.0) {
    rep.counterclockwise = false;
    rep.failures.push_back("vertices are not counterclockwise");
  }
  if (!rep.simple || !rep.counterclockwise) return rep;

  double sum = 0.0;
  for (int s = 0; s < n; ++s) {
    double measured = corner_angle(vertices[s], vertices[(s + 1) % n], vertices[(s + 2) % n]);
    double used = measured;
    if (!declared.empty() && static_cast<int>(declared.size()) == n) {
      used = declared[s].value();
      if (std::abs(used - measured) > kAngleCheckTol) {
        rep.angle_consistency = false;
        std::ostringstream os;
        os << "angle " << s + 1 << " declared " << used << " but measured " << measured;
        rep.failures.push_back(os.str());
      }
    }
    sum += used;
  }
  if (!(sum < (n - 2) * kPi - 1e-12)) {
    rep.angle_sum = false;
    std::ostringstream os;
    os << "angle sum " << sum << " is not below " << (n - 2) << "*pi";
    rep.failures.push_back(os.str());
  }
  return rep;
}

ValidationReport validate(const LabeledPolygon& poly) {
  bool any_declared = false;
  for (const auto& a : poly.angles()) any_declared |= a.declared().has_value() || a.declared_irrational();
  return validate_vertices(poly.vertices(), any_declared ? poly.angles() : std::vector<RationalAngle>{});
}

double area(const LabeledPolygon& poly) {
  double sum = 0.0;
  for (const auto& a : poly.angles()) sum += a.value();
  return (poly.size() - 2) * kPi - sum;
}

LabeledPolygon build_regular(int n, const RationalAngle& interior_angle) {
  if (n < 3) throw GeometryError("regular polygon needs n >= 3");
  double a = interior_angle.value();
  if (!(a > 0.0) || !(n * a < (n - 2) * kPi - 1e-12)) {
    throw AngleSumViolation("n * angle must be below (n - 2) * pi");
  }
  double cosh_r = 1.0 / (std::tan(kPi / n) * std::tan(a / 2.0));
  double r = std::acosh(cosh_r);
  std::vector<HPoint> vs;
  for (int k = 0; k < n; ++k) vs.push_back(HPoint::polar(r, -kPi / n + 2.0 * kPi * k / n));
  return LabeledPolygon(std::move(vs), std::vector<RationalAngle>(n, interior_angle));
}

HIsometry boundary_holonomy(const std::vector<double>& lengths, const std::vector<double>& angles) {
  IsometryChain chain;
  for (size_t s = 0; s < lengths.size(); ++s) {
    chain.push(translation_x(lengths[s]));
    chain.push(rotation_origin(kPi - angles[s]));
  }
  return chain.value();
}

LabeledPolygon polygon_from_lengths(const std::vector<double>& lengths,
                                    const std::vector<RationalAngle>& angles) {
  std::vector<HPoint> vs;
  HIsometry f;
  vs.push_back(HPoint::origin());
  for (size_t s = 0; s + 1 < lengths.size(); ++s) {
    f = f * translation_x(lengths[s]);
    vs.push_back(f.apply(HPoint::origin()));
    f = f * rotation_origin(kPi - angles[s].value());
  }
  Vec3 sum = Vec3::Zero();
  for (const auto& v : vs) sum += v.coords();
  HIsometry centre = boost_to(HPoint::from_coords(sum)).inverse();
  for (auto& v : vs) v = centre.apply(v);
  return LabeledPolygon(std::move(vs), angles);
}

namespace {

Vec3 holonomy_residual(const Mat3& f) { return Vec3(f(0, 2), f(1, 2), 0.5 * (f(1, 0) - f(0, 1))); }

double holonomy_defect(const Mat3& f) { return (f - Mat3::Identity()).norm(); }

struct NewtonOutcome {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> lengths;
};

NewtonOutcome newton_closure(std::vector<double> lengths, const std::vector<int>& unknown,
                             const std::vector<double>& angles) {
  const double step = 1e-6;
  const double tol = 1e-10;
  const int max_iter = 100;
  NewtonOutcome out;
  auto eval = [&](const std::vector<double>& l) { return boundary_holonomy(l, angles).matrix(); };
  Mat3 f = eval(lengths);
  double res = holonomy_defect(f);
  int it = 0;
  for (; it < max_iter && res >= tol; ++it) {
    Vec3 r = holonomy_residual(f);
    Mat3 jac;
    for (int k = 0; k < 3; ++k) {
      std::vector<double> l = lengths;
      l[unknown[k]] += step;
      jac.col(k) = (holonomy_residual(eval(l)) - r) / step;
    }
    Eigen::FullPivLU<Mat3> lu(jac);
    if (!lu.isInvertible()) break;
    Vec3 delta = lu.solve(-r);
    double lambda = 1.0;
    bool improved = false;
    while (lambda > 1e-8) {
      std::vector<double> l = lengths;
      for (int k = 0; k < 3; ++k) l[unknown[k]] += lambda * delta[k];
      Mat3 fl = eval(l);
      double rl = holonomy_defect(fl);
      if (rl < res) {
        lengths = l;
        f = fl;
        res = rl;
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) break;
  }
  out.converged = res < tol;
  out.iterations = it;
  out.residual = res;
  out.lengths = lengths;
  return out;
}

}  // namespace

LabeledPolygon solve_closure(DeformationParams& params, const LabeledPolygon* seed, ClosureInfo* info) {
  const int n = static_cast<int>(params.target_angles.size());
  if (n < 3) throw InfeasibleParams("need at least 3 angles");
  if (static_cast<int>(params.free_lengths.size()) != n - 3) {
    throw InfeasibleParams("expected " + std::to_string(n - 3) + " free lengths");
  }
  std::vector<int> free_sides = params.free_sides;
  if (free_sides.empty()) {
    for (int s = 0; s < n - 3; ++s) free_sides.push_back(s);
  }
  if (static_cast<int>(free_sides.size()) != n - 3) throw InfeasibleParams("free side count mismatch");
  std::vector<bool> is_free(n, false);
  for (int s : free_sides) {
    if (s < 0 || s >= n || is_free[s]) throw InfeasibleParams("bad free side index");
    is_free[s] = true;
  }
  for (double l : params.free_lengths) {
    if (!(l > 0.0)) throw InfeasibleParams("free lengths must be positive");
  }
  std::vector<double> angles;
  double sum = 0.0, mean = 0.0;
  for (const auto& a : params.target_angles) {
    if (!(a.value() > 0.0 && a.value() < 2.0 * kPi)) throw InfeasibleParams("angle out of range");
    angles.push_back(a.value());
    sum += a.value();
  }
  mean = sum / n;
  if (!(sum < (n - 2) * kPi - 1e-12)) throw AngleSumViolation("angle sum must be below (n - 2) * pi");

  std::vector<int> unknown;
  for (int s = 0; s < n; ++s) {
    if (!is_free[s]) unknown.push_back(s);
  }

  std::vector<double> base(n, 0.0);
  for (size_t k = 0; k < free_sides.size(); ++k) base[free_sides[k]] = params.free_lengths[k];

  std::vector<std::vector<double>> starts;
  if (seed && seed->size() == n) {
    std::vector<double> l = base;
    for (int s : unknown) l[s] = seed->side_length(s);
    starts.push_back(l);
  }
  double s0 = 1.0;
  if (mean < kPi * (n - 2) / n) {
    s0 = 2.0 * std::acosh(std::max(1.0, std::cos(kPi / n) / std::sin(mean / 2.0)));
  }
  double free_mean = 0.0;
  for (double l : params.free_lengths) free_mean += l;
  if (!params.free_lengths.empty()) free_mean /= static_cast<double>(params.free_lengths.size());
  for (double scale : {1.0, 0.5, 1.5, 2.0, 0.25, 3.0}) {
    std::vector<double> l = base;
    for (int s : unknown) l[s] = s0 * scale;
    starts.push_back(l);
    if (free_mean > 0.0) {
      for (int s : unknown) l[s] = free_mean * scale;
      starts.push_back(l);
    }
  }

  NewtonOutcome last;
  bool any_converged = false;
  std::string infeasible_reason = "no simple polygon found";
  for (const auto& start : starts) {
    NewtonOutcome o = newton_closure(start, unknown, angles);
    last = o;
    if (!o.converged) continue;
    any_converged = true;
    bool positive = true;
    for (double l : o.lengths) positive &= l > 0.0;
    if (!positive) {
      infeasible_reason = "a solved side length is not positive";
      continue;
    }
    std::vector<HPoint> vs;
    try {
      LabeledPolygon poly = polygon_from_lengths(o.lengths, params.target_angles);
      if (!validate(poly).ok()) {
        infeasible_reason = "solution is not a valid simple polygon";
        continue;
      }
      params.solved_lengths.clear();
      for (int s : unknown) params.solved_lengths.push_back(o.lengths[s]);
      if (info) {
        info->iterations = o.iterations;
        info->residual = o.residual;
        info->lengths = o.lengths;
      }
      return poly;
    } catch (const GeometryError&) {
      infeasible_reason = "solution is degenerate";
    }
  }
  if (!any_converged) throw NoConvergence(last.iterations, last.residual);
  throw InfeasibleParams(infeasible_reason);
}

AngleClassification classify_angles(const LabeledPolygon& poly) {
  AngleClassification out;
  int even = 0;
  bool irrational = false;
  for (const auto& a : poly.angles()) {
    AngleClass c = a.classify();
    out.per_angle.push_back(c);
    if (c == AngleClass::EvenSubmultiple) ++even;
    if (c == AngleClass::Irrational) irrational = true;
  }
  if (irrational) {
    out.summary = AngleSummary::HasIrrational;
  } else if (even == poly.size()) {
    out.summary = AngleSummary::AllEvenSubmultiple;
  } else if (even == 0) {
    out.summary = AngleSummary::NoneEvenSubmultiple;
  } else {
    out.summary = AngleSummary::Mixed;
  }
  return out;
}

bool is_good(const LabeledPolygon& poly) {
  for (const auto& a : poly.angles()) {
    if (a.submultiple() < 2) return false;
  }
  return true;
}

double aligned_distance(const LabeledPolygon& a, const LabeledPolygon& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < a.size(); ++i) {
    HIsometry g = vertex_frame(b, i) * vertex_frame(a, i).inverse();
    double worst = 0.0;
    for (int j = 0; j < a.size(); ++j) worst = std::max(worst, distance(g.apply(a.vertex(j)), b.vertex(j)));
    best = std::min(best, worst);
  }
  return best;
}

}  // namespace hypb
