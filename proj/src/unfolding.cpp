#include "hypbill/unfolding.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace hypb {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::sqrt;

struct W3 {
  Wide x, y, z;
};

W3 operator+(const W3& a, const W3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
W3 operator-(const W3& a, const W3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
W3 operator*(const Wide& s, const W3& a) { return {s * a.x, s * a.y, s * a.z}; }

Wide q(const W3& a, const W3& b) { return a.x * b.x + a.y * b.y - a.z * b.z; }
// J (a x b): normal of the line through a and b, or the point where the
// lines with normals J a, J b meet.
W3 jcross(const W3& a, const W3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, -(a.x * b.y - a.y * b.x)};
}
Wide enorm(const W3& a) { return sqrt(a.x * a.x + a.y * a.y + a.z * a.z); }
W3 to_point(const W3& a) {
  W3 p = (1 / sqrt(-q(a, a))) * a;
  return p.z < 0 ? Wide(-1) * p : p;
}
W3 to_normal(const W3& a) { return (1 / sqrt(q(a, a))) * a; }
Vec3 to_vec(const W3& a) {
  return Vec3(static_cast<double>(a.x), static_cast<double>(a.y), static_cast<double>(a.z));
}
// Far points lose the hyperboloid constraint in double; divide first.
Vec2 wide_klein(const W3& a) { return Vec2(static_cast<double>(a.x / a.z), static_cast<double>(a.y / a.z)); }
W3 from_vec(const Vec3& v) { return {Wide(v.x()), Wide(v.y()), Wide(v.z())}; }

struct WMat {
  Wide m[3][3];
  static WMat identity() {
    WMat r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = (i == j) ? 1 : 0;
    return r;
  }
  W3 operator*(const W3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z, m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }
  WMat operator*(const WMat& o) const {
    WMat r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j] + m[i][2] * o.m[2][j];
    return r;
  }
  // J m^T J
  WMat lorentz_inverse() const {
    WMat r;
    const int s[3] = {1, 1, -1};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i] * s[i] * s[j];
    return r;
  }
};

// I - 2 n n^T J
WMat reflection(const W3& n) {
  const Wide nv[3] = {n.x, n.y, n.z};
  const Wide jn[3] = {n.x, n.y, -n.z};
  WMat r = WMat::identity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] -= 2 * nv[i] * jn[j];
  return r;
}

// Base polygon in quad precision.
struct WidePolygon {
  std::vector<W3> verts;
  std::vector<W3> normals;
  std::vector<WMat> refl;

  explicit WidePolygon(const LabeledPolygon& poly) {
    int n = poly.size();
    for (const auto& v : poly.vertices()) {
      Wide x = v.x(), y = v.y();
      verts.push_back({x, y, sqrt(1 + x * x + y * y)});
    }
    for (int s = 0; s < n; ++s) {
      normals.push_back(to_normal(jcross(verts[s], verts[(s + 1) % n])));
      refl.push_back(reflection(normals.back()));
    }
  }
};

void check_word(const LabeledPolygon& poly, const BounceWord& word) {
  for (size_t i = 0; i < word.size(); ++i) {
    if (word[i] < 1 || word[i] > poly.size()) {
      throw GeometryError("label " + std::to_string(word[i]) + " out of range");
    }
    if (i > 0 && word[i] == word[i - 1]) throw ImmediateRepeat(static_cast<int>(i) + 1);
  }
}

// The corridor of a word expressed in the frame of its middle copy.
struct Chart {
  int m = 0;
  int centre = 0;
  std::vector<WMat> copy;  // copy[j] maps the base polygon onto copy j
  std::vector<int> orient;
  std::vector<W3> left, right;  // gate endpoints, on the hyperboloid
  double scale = 1.0;

  Chart(const WidePolygon& wp, const BounceWord& word) : m(static_cast<int>(word.size())), centre(m / 2) {
    copy.assign(m + 1, WMat::identity());
    orient.assign(m + 1, 1);
    for (int j = centre + 1; j <= m; ++j) {
      copy[j] = copy[j - 1] * wp.refl[word[j - 1] - 1];
      orient[j] = -orient[j - 1];
    }
    for (int j = centre - 1; j >= 0; --j) {
      copy[j] = copy[j + 1] * wp.refl[word[j] - 1];
      orient[j] = -orient[j + 1];
    }
    const int n = static_cast<int>(wp.verts.size());
    for (int i = 0; i < m; ++i) {
      int s = word[i] - 1;
      W3 a = to_point(copy[i] * wp.verts[(s + 1) % n]);
      W3 b = to_point(copy[i] * wp.verts[s]);
      if (orient[i] < 0) std::swap(a, b);
      left.push_back(a);
      right.push_back(b);
      scale = std::max({scale, static_cast<double>(a.z), static_cast<double>(b.z)});
    }
  }

  W3 vertex(const WidePolygon& wp, int j, int k) const { return to_point(copy[j] * wp.verts[k]); }
};

struct Evaluation {
  Wide clearance = -1;  // sinh of the margin
  bool ordered = false;
  std::vector<Wide> params;  // sinh of crossing positions
};

// Base point and direction on the line with unit normal n.
void line_frame(const W3& n, W3& base, W3& dir) {
  W3 o{0, 0, 1};
  base = to_point(o - q(o, n) * n);
  dir = jcross(n, base);
  dir = to_normal(dir);
}

W3 crossing(const W3& a, const W3& b, const W3& n) { return to_point((-q(b, n)) * a + q(a, n) * b); }

bool strictly_increasing(const std::vector<Wide>& v) {
  for (size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

// Segments [p1,p2] and [s1,s2] on the hyperboloid meet (touching counts).
bool segments_meet(const W3& p1, const W3& p2, const W3& s1, const W3& s2) {
  W3 ns = jcross(s1, s2);
  W3 np = jcross(p1, p2);
  Wide a = q(p1, ns), b = q(p2, ns);
  Wide c = q(s1, np), d = q(s2, np);
  return a * b <= 0 && c * d <= 0;
}

class Engine {
 public:
  Engine(const LabeledPolygon& poly, const BounceWord& word)
      : poly_(poly), wp_(poly), word_(word), chart_(wp_, word), convex_(poly.is_convex()) {}

  Evaluation evaluate(const W3& raw) const {
    Evaluation ev;
    Wide nn = q(raw, raw);
    if (!(nn > 0)) return ev;
    W3 n = (1 / sqrt(nn)) * raw;
    Wide clr = std::numeric_limits<double>::infinity();
    for (int i = 0; i < chart_.m; ++i) {
      clr = std::min(clr, q(chart_.left[i], n));
      clr = std::min(clr, -q(chart_.right[i], n));
      if (clr <= 0) {
        ev.clearance = clr;
        return ev;
      }
    }
    ev.clearance = clr;
    W3 base, dir;
    line_frame(n, base, dir);
    std::vector<W3> xs;
    for (int i = 0; i < chart_.m; ++i) {
      xs.push_back(crossing(chart_.left[i], chart_.right[i], n));
      ev.params.push_back(q(xs.back(), dir));
    }
    ev.ordered = strictly_increasing(ev.params) && (convex_ || stays_inside(xs, {}, {}));
    return ev;
  }

  // For non-convex polygons: each piece of the line between consecutive
  // crossings must stay inside its copy.
  bool stays_inside(const std::vector<W3>& xs, const std::optional<W3>& from, const std::optional<W3>& to) const {
    const int n = poly_.size();
    auto check_copy = [&](int j, const W3& a, const W3& b, int skip1, int skip2) {
      for (int s = 0; s < n; ++s) {
        if (s == skip1 || s == skip2) continue;
        W3 v0 = chart_.vertex(wp_, j, s), v1 = chart_.vertex(wp_, j, (s + 1) % n);
        if (segments_meet(a, b, v0, v1)) return false;
      }
      return true;
    };
    for (int j = 1; j < chart_.m; ++j) {
      if (!check_copy(j, xs[j - 1], xs[j], word_[j - 1] - 1, word_[j] - 1)) return false;
    }
    if (from && !check_copy(0, *from, xs.front(), word_.front() - 1, -1)) return false;
    if (to && !check_copy(chart_.m, xs.back(), *to, word_.back() - 1, -1)) return false;
    return true;
  }

  Realizability decide(const RealizeOptions& opts) const {
    Realizability out;
    const int m = chart_.m;
    // Distinct gate endpoints.
    std::vector<W3> pts;
    auto add_point = [&](const W3& p) {
      for (const auto& o : pts) {
        if (enorm(o - p) <= Wide(1e-26) * enorm(p)) return;
      }
      pts.push_back(p);
    };
    for (int i = 0; i < m; ++i) {
      add_point(chart_.left[i]);
      add_point(chart_.right[i]);
    }
    std::vector<Vec3> pts_d, left_d, right_d;
    for (const auto& p : pts) pts_d.push_back(to_vec(p).normalized());
    for (int i = 0; i < m; ++i) {
      left_d.push_back(to_vec(chart_.left[i]).normalized());
      right_d.push_back(to_vec(chart_.right[i]).normalized());
    }

    // Extreme rays of the closed cone of admissible normals.
    std::vector<W3> rays;
    const Wide rel_tol = 1e-26;
    for (size_t a = 0; a < pts.size(); ++a) {
      for (size_t b = a + 1; b < pts.size(); ++b) {
        Vec3 nd(pts_d[a].y() * pts_d[b].z() - pts_d[a].z() * pts_d[b].y(),
                pts_d[a].z() * pts_d[b].x() - pts_d[a].x() * pts_d[b].z(),
                -(pts_d[a].x() * pts_d[b].y() - pts_d[a].y() * pts_d[b].x()));
        double nd_norm = nd.norm();
        W3 nw = jcross(pts[a], pts[b]);
        Wide nw_norm = enorm(nw);
        if (nw_norm == 0) continue;
        for (int sign : {1, -1}) {
          // Cheap rejection in double precision first.
          bool reject = false;
          for (int i = 0; i < m && !reject; ++i) {
            double ql = sign * minkowski(left_d[i], nd);
            double qr = sign * minkowski(right_d[i], nd);
            if (ql < -1e-9 * nd_norm || qr > 1e-9 * nd_norm) reject = true;
          }
          if (reject) continue;
          W3 cand = Wide(sign) * nw;
          bool ok = true;
          for (int i = 0; i < m && ok; ++i) {
            if (q(chart_.left[i], cand) < -rel_tol * enorm(chart_.left[i]) * nw_norm) ok = false;
            if (q(chart_.right[i], cand) > rel_tol * enorm(chart_.right[i]) * nw_norm) ok = false;
          }
          if (ok && q(cand, cand) > 0) rays.push_back(to_normal(cand));
        }
      }
    }

    std::vector<W3> candidates;
    if (!rays.empty()) {
      W3 sum_q{0, 0, 0}, sum_e{0, 0, 0};
      for (const auto& r : rays) {
        sum_q = sum_q + r;
        sum_e = sum_e + (1 / enorm(r)) * r;
      }
      candidates.push_back(sum_q);
      candidates.push_back(sum_e);
      W3 c = (1 / enorm(sum_e)) * sum_e;
      for (const auto& r : rays) candidates.push_back(c + (1 / enorm(r)) * r);
      const size_t cap = 48;
      size_t lim = std::min(rays.size(), cap);
      for (size_t a = 0; a < lim; ++a)
        for (size_t b = a + 1; b < lim; ++b) candidates.push_back((1 / enorm(rays[a])) * rays[a] + (1 / enorm(rays[b])) * rays[b]);
    }
    // Perpendicular bisector of each gate.
    for (int i = 0; i < m; ++i) {
      W3 mid = to_point(chart_.left[i] + chart_.right[i]);
      W3 t = chart_.left[i] + q(chart_.left[i], mid) * mid;
      candidates.push_back(t);
    }
    if (opts.hint && !opts.hint->events.empty()) {
      // The billiard segment after bounce `centre` lies in the middle copy,
      // whose frame is the polygon's own frame.
      const Trajectory& tr = *opts.hint;
      HPoint p = chart_.centre == 0 ? tr.start : tr.events[chart_.centre - 1].hit_point;
      Vec3 t = chart_.centre == 0 ? tr.start_tangent : tr.events[chart_.centre - 1].outgoing;
      if (chart_.centre < static_cast<int>(tr.events.size()) + 1) {
        HGeodesic g = geodesic_through(p, point_along(p, t, 1.0));
        candidates.push_back(from_vec(g.normal()));
      }
    }

    Wide best = -1;
    std::optional<W3> best_n;
    Evaluation best_ev;
    for (const auto& c : candidates) {
      Evaluation ev = evaluate(c);
      if (ev.clearance > 0 && ev.ordered && ev.clearance > best) {
        best = ev.clearance;
        best_n = to_normal(c);
        best_ev = ev;
      }
    }
    double noise = 1e-28 * chart_.scale;
    if (!best_n || best <= noise) {
      out.verdict = Verdict::No;
      out.margin = best_n ? std::asinh(static_cast<double>(best)) : 0.0;
      out.reason = rays.empty() ? "no_transversal" : "degenerate_transversal";
      return out;
    }
    double margin = std::asinh(static_cast<double>(best));
    out.margin = margin;
    out.witness = make_witness(*best_n, best_ev, margin);
    if (margin > kGateEps) {
      out.verdict = Verdict::Yes;
      out.reason = "transversal";
    } else {
      out.verdict = Verdict::Grazing;
      out.reason = "margin_below_gate_epsilon";
    }
    return out;
  }

  TransversalWitness make_witness(const W3& n, const Evaluation& ev, double margin) const {
    TransversalWitness w;
    w.chart = chart_.centre;
    w.normal = {n.x, n.y, n.z};
    w.margin = margin;
    for (const auto& s : ev.params) w.crossing_params.push_back(std::asinh(static_cast<double>(s)));
    // Back to the frame of copy 0: copy[0] maps copy-0 coordinates into the chart.
    W3 n0 = chart_.copy[0].lorentz_inverse() * n;
    try {
      w.chord = to_klein_line(HGeodesic(to_vec(n0)));
    } catch (const GeometryError&) {
      w.chord = {Vec2::Zero(), Vec2::Zero()};
    }
    return w;
  }

  DiagonalResult diagonal() const {
    DiagonalResult best;
    best.reason = "no_vertex_pair";
    const int n = poly_.size();
    const int m = chart_.m;
    Wide best_clr = 0;
    Wide threshold = sinh(Wide(kGateEps));
    for (int a = 0; a < n; ++a) {
      W3 v = chart_.vertex(wp_, 0, a);
      for (int b = 0; b < n; ++b) {
        W3 w = chart_.vertex(wp_, m, b);
        W3 raw = jcross(v, w);
        if (!(q(raw, raw) > Wide(1e-40) * enorm(v) * enorm(v) * enorm(w) * enorm(w))) continue;
        W3 nrm = to_normal(raw);
        Wide clr = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m && clr > threshold; ++i) {
          clr = std::min(clr, q(chart_.left[i], nrm));
          clr = std::min(clr, -q(chart_.right[i], nrm));
        }
        if (!(clr > threshold)) continue;
        W3 base, dir;
        line_frame(nrm, base, dir);
        std::vector<Wide> params{q(v, dir)};
        std::vector<W3> xs;
        for (int i = 0; i < m; ++i) {
          xs.push_back(crossing(chart_.left[i], chart_.right[i], nrm));
          params.push_back(q(xs.back(), dir));
        }
        params.push_back(q(w, dir));
        if (!strictly_increasing(params)) continue;
        if (!convex_ && !stays_inside(xs, v, w)) continue;
        if (clr > best_clr) {
          best_clr = clr;
          best.found = true;
          best.from_vertex = a;
          best.to_vertex = b;
          best.margin = std::asinh(static_cast<double>(clr));
          best.reason = "vertex_to_vertex";
          W3 n0 = chart_.copy[0].lorentz_inverse() * nrm;
          W3 v0 = chart_.copy[0].lorentz_inverse() * v;
          W3 w0 = chart_.copy[0].lorentz_inverse() * w;
          (void)n0;
          best.chord = {wide_klein(v0), wide_klein(w0)};
        }
      }
    }
    return best;
  }

  const Chart& chart() const { return chart_; }

 private:
  const LabeledPolygon& poly_;
  WidePolygon wp_;
  BounceWord word_;
  Chart chart_;
  bool convex_;
};

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Grazing: return "grazing";
  }
  return "?";
}

Corridor unfold(const LabeledPolygon& poly, const BounceWord& word) {
  check_word(poly, word);
  Corridor c;
  c.word = word;
  IsometryChain chain;
  c.copies.push_back(chain.value());
  for (int b : word) {
    const HIsometry& g = chain.value();
    auto [v0, v1] = poly.side_segment(b - 1);
    c.gates.push_back({to_klein(g.apply(v0)), to_klein(g.apply(v1))});
    chain.push(reflect(poly.side(b - 1)));
    c.copies.push_back(chain.value());
  }
  for (const auto& v : poly.vertices()) {
    c.vertices0.push_back(to_klein(v));
    c.verticesM.push_back(to_klein(c.copies.back().apply(v)));
  }
  return c;
}

Realizability realizable(const LabeledPolygon& poly, const BounceWord& word, const RealizeOptions& opts) {
  try {
    check_word(poly, word);
  } catch (const ImmediateRepeat&) {
    Realizability r;
    r.verdict = Verdict::No;
    r.reason = "immediate_repeat";
    return r;
  }
  if (word.empty()) {
    // Any chord through the interior will do.
    Realizability r;
    r.verdict = Verdict::Yes;
    r.reason = "empty_word";
    HPoint c = poly.interior_point();
    HGeodesic g = geodesic_through(c, point_along(c, tangent_at(c, 0.0), 1.0));
    TransversalWitness w;
    w.chord = to_klein_line(g);
    w.margin = std::numeric_limits<double>::infinity();
    w.normal = {Wide(g.normal().x()), Wide(g.normal().y()), Wide(g.normal().z())};
    r.witness = w;
    r.margin = w.margin;
    return r;
  }
  Engine e(poly, word);
  return e.decide(opts);
}

bool verify_witness(const LabeledPolygon& poly, const BounceWord& word, const TransversalWitness& w) {
  check_word(poly, word);
  const int m = static_cast<int>(word.size());
  if (m == 0) return true;
  if (w.chart < 0 || w.chart > m) return false;
  // Copies relative to the witness chart, rebuilt from the side reflections.
  WidePolygon wp(poly);
  const int n = poly.size();
  std::vector<WMat> frame(m + 1, WMat::identity());
  for (int j = w.chart + 1; j <= m; ++j) frame[j] = frame[j - 1] * wp.refl[word[j - 1] - 1];
  for (int j = w.chart - 1; j >= 0; --j) frame[j] = frame[j + 1] * wp.refl[word[j] - 1];
  W3 nrm = to_normal({w.normal[0], w.normal[1], w.normal[2]});
  W3 base, dir;
  line_frame(nrm, base, dir);
  std::vector<Wide> params;
  for (int i = 0; i < m; ++i) {
    W3 a = to_point(frame[i] * wp.verts[word[i] - 1]);
    W3 b = to_point(frame[i] * wp.verts[word[i] % n]);
    Wide qa = q(a, nrm), qb = q(b, nrm);
    // Strict crossing: endpoints on opposite sides.
    if (!(qa * qb < 0)) return false;
    if (std::min(abs(qa), abs(qb)) <= Wide(0.5 * w.margin)) return false;
    params.push_back(q(crossing(a, b, nrm), dir));
  }
  return strictly_increasing(params);
}

DiagonalResult generalized_diagonal(const LabeledPolygon& poly, const BounceWord& word) {
  DiagonalResult r;
  try {
    check_word(poly, word);
  } catch (const ImmediateRepeat&) {
    r.reason = "immediate_repeat";
    return r;
  }
  if (word.empty()) {
    r.reason = "empty_word";
    return r;
  }
  Engine e(poly, word);
  return e.diagonal();
}

bool word_less(const BounceWord& a, const BounceWord& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

DiagonalEnumeration enumerate_diagonals(const LabeledPolygon& poly, int max_len, long node_budget) {
  if (max_len > kMaxDiagonalLength) {
    throw BudgetExceeded("max_len " + std::to_string(max_len) + " exceeds " + std::to_string(kMaxDiagonalLength));
  }
  DiagonalEnumeration out;
  if (max_len <= 0) return out;
  const int n = poly.size();
  BounceWord w;
  std::function<void()> dfs = [&]() {
    for (int b = 1; b <= n; ++b) {
      if (!w.empty() && w.back() == b) continue;
      if (++out.nodes > node_budget) {
        throw BudgetExceeded("node budget " + std::to_string(node_budget) + " exhausted");
      }
      w.push_back(b);
      Engine e(poly, w);
      Realizability r = e.decide({});
      if (r.verdict != Verdict::No) {
        if (e.diagonal().found) out.words.push_back(w);
        if (static_cast<int>(w.size()) < max_len) dfs();
      }
      w.pop_back();
    }
  };
  dfs();
  std::sort(out.words.begin(), out.words.end(), word_less);
  return out;
}

}  // namespace hypb
