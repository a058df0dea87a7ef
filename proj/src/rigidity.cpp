#include "hypbill/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <unordered_map>

namespace hypb {

namespace {

constexpr double kPi = M_PI;

struct Element {
  Mat3 m;
  int orient;
};

struct CellKey {
  long x, y;
  bool operator==(const CellKey& o) const { return x == o.x && y == o.y; }
};

struct CellHash {
  size_t operator()(const CellKey& k) const {
    return std::hash<long>()(k.x) * 1000003u ^ std::hash<long>()(k.y);
  }
};

constexpr double kCell = 1e-6;

CellKey cell_of(const Vec3& p) {
  return {static_cast<long>(std::floor(p.x() / kCell)), static_cast<long>(std::floor(p.y() / kCell))};
}

class ElementSet {
 public:
  ElementSet(const HPoint& b1, const HPoint& b2) : b1_(b1), b2_(b2) {}

  // Index of an element equal to `e`, or -1.
  long find(const Element& e) const {
    Vec3 p = e.m * b1_.coords();
    CellKey c = cell_of(p);
    for (long dx = -1; dx <= 1; ++dx) {
      for (long dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find({c.x + dx, c.y + dy});
        if (it == cells_.end()) continue;
        for (long idx : it->second) {
          const Element& o = items_[idx];
          if (o.orient != e.orient) continue;
          double d = (o.m - e.m).cwiseAbs().maxCoeff();
          if (d < 1e-7 * (1.0 + o.m.cwiseAbs().maxCoeff())) return idx;
        }
      }
    }
    return -1;
  }

  long insert(const Element& e) {
    items_.push_back(e);
    cells_[cell_of(e.m * b1_.coords())].push_back(static_cast<long>(items_.size()) - 1);
    return static_cast<long>(items_.size()) - 1;
  }

  const Element& operator[](long i) const { return items_[i]; }
  long size() const { return static_cast<long>(items_.size()); }

 private:
  HPoint b1_, b2_;
  std::vector<Element> items_;
  std::unordered_map<CellKey, std::vector<long>, CellHash> cells_;
};

// Unit normal with the base point on its positive side.
Vec3 canonical_normal(Vec3 n, const HPoint& base) {
  n /= std::sqrt(minkowski(n, n));
  double s = minkowski(base.coords(), n);
  if (s < -1e-12 || (std::abs(s) <= 1e-12 && (n.x() < 0 || (n.x() == 0 && n.y() < 0)))) n = -n;
  return n;
}

bool same_line(const Vec3& a, const Vec3& b) {
  double scale = 1.0 + std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() < kLineDedupTol * scale || (a + b).cwiseAbs().maxCoeff() < kLineDedupTol * scale;
}

// Returns a witness when two distinct lines are suspiciously close.
std::optional<IndiscretenessWitness> close_pair(const Vec3& a, const Vec3& b) {
  double c = std::abs(minkowski(a, b));
  IndiscretenessWitness w;
  w.lines = {a, b};
  if (std::abs(c - 1.0) < 1e-12) {
    w.kind = "asymptotic_lines";
    w.value = 0.0;
    return w;
  }
  if (c < 1.0) {
    double theta = std::acos(c);
    if (theta < kIndiscreteTol) {
      w.kind = "close_crossing";
      w.value = theta;
      return w;
    }
  } else {
    double d = std::acosh(c);
    if (d < kIndiscreteTol) {
      w.kind = "close_ultraparallel";
      w.value = d;
      return w;
    }
  }
  return std::nullopt;
}

bool line_meets_region(const LabeledPolygon& poly, const Vec3& n, double margin) {
  bool pos = false, neg = false;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : poly.vertices()) {
    double s = minkowski(v.coords(), n);
    pos |= s > 0;
    neg |= s < 0;
    best = std::min(best, std::abs(std::asinh(s)));
  }
  return (pos && neg) || best <= margin;
}

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Clip a convex Klein polygon to {p : Q(p, n) >= 0}.
std::vector<Vec2> clip(const std::vector<Vec2>& poly, const Vec3& n) {
  std::vector<Vec2> out;
  auto f = [&](const Vec2& p) { return n.x() * p.x() + n.y() * p.y() - n.z(); };
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    double fa = f(a), fb = f(b);
    if (fa >= 0) out.push_back(a);
    if ((fa >= 0) != (fb >= 0)) {
      double t = fa / (fa - fb);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

std::vector<Vec2> simplify_ring(const std::vector<Vec2>& ring) {
  std::vector<Vec2> r;
  for (const auto& p : ring) {
    if (r.empty() || (p - r.back()).norm() > 1e-11) r.push_back(p);
  }
  while (r.size() > 1 && (r.front() - r.back()).norm() <= 1e-11) r.pop_back();
  bool changed = true;
  while (changed && r.size() > 3) {
    changed = false;
    for (size_t i = 0; i < r.size(); ++i) {
      const Vec2& a = r[(i + r.size() - 1) % r.size()];
      const Vec2& b = r[i];
      const Vec2& c = r[(i + 1) % r.size()];
      if (std::abs(cross2(b - a, c - b)) < 1e-12 * (b - a).norm() * (c - b).norm() + 1e-18) {
        r.erase(r.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
  return r;
}

HPoint generic_base(const LabeledPolygon& poly) {
  HPoint c = poly.interior_point();
  double room = poly.boundary_distance(c);
  for (double f : {0.173, 0.0913, 0.0411}) {
    HPoint b = point_along(c, tangent_at(c, 0.3719), f * room);
    if (poly.contains(b) && poly.boundary_distance(b) > 1e-3) return b;
  }
  return c;
}

void check_tile(const LabeledPolygon& poly, TilingResult& res, const std::vector<Vec3>& lines) {
  res.invariants_ok = true;
  auto fail = [&](const std::string& s) {
    res.invariants_ok = false;
    res.invariant_failures.push_back(s);
  };
  if (res.tile.size() < 3) {
    fail("tile has fewer than 3 vertices");
    return;
  }
  std::unique_ptr<LabeledPolygon> tile;
  try {
    tile = std::make_unique<LabeledPolygon>(res.tile);
  } catch (const GeometryError& e) {
    fail(std::string("tile is degenerate: ") + e.what());
    return;
  }
  res.triangle = tile->size() == 3;
  res.tile_k.clear();
  for (int s = 0; s < tile->size(); ++s) {
    double a = tile->measured_angle(s);
    long k = std::lround(kPi / a);
    res.tile_k.push_back(k);
    if (k < 2 || std::abs(a - kPi / static_cast<double>(k)) > 1e-7) {
      fail("tile angle " + std::to_string(s + 1) + " is not an integral submultiple of pi");
    }
  }
  double ratio = area(poly) / area(*tile);
  res.tiles_in_P = static_cast<int>(std::lround(ratio));
  if (std::abs(ratio - res.tiles_in_P) > 1e-6 || res.tiles_in_P < 1) fail("area ratio is not an integer");
  res.even_at_vertices = true;
  for (const auto& v : poly.vertices()) {
    int through = 0;
    for (const auto& n : lines) {
      if (std::abs(minkowski(v.coords(), n)) < 1e-8) ++through;
    }
    if (through % 2 != 0) res.even_at_vertices = false;
  }
}

}  // namespace

std::string to_string(TilingResult::Status s) {
  switch (s) {
    case TilingResult::Status::Discrete: return "discrete";
    case TilingResult::Status::Indiscrete: return "indiscrete";
    case TilingResult::Status::BudgetExhausted: return "budget_exhausted";
  }
  return "?";
}

std::string to_string(RigidityVerdict::Kind k) {
  switch (k) {
    case RigidityVerdict::Kind::Rigid: return "rigid";
    case RigidityVerdict::Kind::Flexible: return "flexible";
    case RigidityVerdict::Kind::Unknown: return "unknown";
  }
  return "?";
}

TilingResult tiling_closure(const LabeledPolygon& poly, const TilingBudget& budget) {
  TilingResult res;
  const int n = poly.size();
  for (int s = 0; s < n; ++s) {
    if (poly.angle(s).classify() == AngleClass::Irrational) {
      res.status = TilingResult::Status::Indiscrete;
      IndiscretenessWitness w;
      w.kind = "irrational_angle";
      w.angle_index = s;
      w.value = poly.angle(s).value();
      res.witness = w;
      return res;
    }
  }

  HPoint b1 = generic_base(poly);
  HPoint b2 = point_along(b1, tangent_at(b1, 1.234), 0.05);
  double reach = 0.0;
  for (const auto& v : poly.vertices()) reach = std::max(reach, distance(b1, v));
  const double prune = 2.0 * reach + budget.region_margin + 1.0;

  std::vector<Element> gens;
  for (int s = 0; s < n; ++s) {
    HIsometry r = reflect(poly.side(s));
    gens.push_back({r.matrix(), -1});
  }
  for (int s = 0; s < n; ++s) {
    HIsometry r = rotation(poly.vertex(s), kPi);
    gens.push_back({r.matrix(), 1});
  }

  ElementSet set(b1, b2);
  std::vector<Vec3> lines;
  std::vector<int> line_depth;

  auto add_line = [&](const Vec3& raw, int depth) -> std::optional<IndiscretenessWitness> {
    Vec3 nrm = canonical_normal(raw, b1);
    if (!line_meets_region(poly, nrm, budget.region_margin)) return std::nullopt;
    for (const auto& l : lines) {
      if (same_line(l, nrm)) return std::nullopt;
    }
    for (const auto& l : lines) {
      if (auto w = close_pair(l, nrm)) return w;
    }
    lines.push_back(nrm);
    line_depth.push_back(depth);
    return std::nullopt;
  };

  auto add_element = [&](const Element& e, int depth) -> std::optional<IndiscretenessWitness> {
    double tr = e.m.trace();
    double moved = std::max(distance(b1, HPoint::from_coords(e.m * b1.coords())),
                            distance(b2, HPoint::from_coords(e.m * b2.coords())));
    if (moved > 1e-7) {
      double scale = 1e-15 * (1.0 + e.m.cwiseAbs().maxCoeff());
      if (e.orient > 0 && std::abs(tr - 3.0) < kIndiscreteTol * kIndiscreteTol) {
        IndiscretenessWitness w;
        w.kind = tr < 3.0 ? "small_rotation" : "small_translation";
        w.element = e.m;
        w.value = tr < 3.0 ? std::acos(std::clamp((tr - 1.0) / 2.0, -1.0, 1.0))
                           : std::acosh(std::max(1.0, (tr - 1.0) / 2.0));
        return w;
      }
      if (e.orient < 0) {
        double excess = tr - 1.0;
        if (std::abs(excess) <= 1e3 * scale) {
          // A reflection: I - M = 2 n n^T J.
          Mat3 d = Mat3::Identity() - e.m;
          int col = 0;
          for (int c = 1; c < 3; ++c) {
            if (d.col(c).norm() > d.col(col).norm()) col = c;
          }
          Vec3 nv = d.col(col);
          if (minkowski(nv, nv) > 0) {
            if (auto w = add_line(nv, depth)) return w;
          }
        } else if (excess > 0 && excess < kIndiscreteTol * kIndiscreteTol) {
          IndiscretenessWitness w;
          w.kind = "small_glide";
          w.element = e.m;
          w.value = std::acosh(1.0 + excess / 2.0);
          return w;
        }
      }
    }
    for (int s = 0; s < n; ++s) {
      if (auto w = add_line(e.m * poly.side(s).normal(), depth)) return w;
    }
    return std::nullopt;
  };

  set.insert({Mat3::Identity(), 1});
  if (auto w = add_element({Mat3::Identity(), 1}, 0)) {
    res.status = TilingResult::Status::Indiscrete;
    res.witness = w;
    return res;
  }
  std::vector<long> frontier{0};
  int depth = 0;
  bool stable = false;
  for (depth = 1; depth <= budget.max_word_len; ++depth) {
    std::vector<long> next;
    for (long gi : frontier) {
      for (const auto& g : gens) {
        Element h{set[gi].m * g.m, set[gi].orient * g.orient};
        if (depth % 8 == 0) h.m = HIsometry(h.m, h.orient).reorthonormalized().matrix();
        if (distance(b1, HPoint::from_coords(h.m * b1.coords())) > prune) continue;
        if (set.find(h) >= 0) continue;
        long idx = set.insert(h);
        next.push_back(idx);
        if (auto w = add_element(h, depth)) {
          res.status = TilingResult::Status::Indiscrete;
          res.witness = w;
          res.depth = depth;
          res.elements = set.size();
          res.lines = lines;
          return res;
        }
        if (set.size() > budget.max_elements) {
          res.status = TilingResult::Status::BudgetExhausted;
          res.depth = depth;
          res.elements = set.size();
          res.lines = lines;
          return res;
        }
      }
    }
    frontier = std::move(next);
    // In-region line set unchanged over two more levels.
    if (depth >= 3) {
      bool fresh = false;
      for (int d : line_depth) fresh |= d >= depth - 1;
      if (!fresh) {
        stable = true;
        break;
      }
    }
    if (frontier.empty()) {
      stable = true;
      break;
    }
  }
  res.depth = std::min(depth, budget.max_word_len);
  res.elements = set.size();
  std::sort(lines.begin(), lines.end(), [](const Vec3& a, const Vec3& b) {
    if (a.z() != b.z()) return a.z() < b.z();
    if (a.x() != b.x()) return a.x() < b.x();
    return a.y() < b.y();
  });
  res.lines = lines;
  if (!stable) {
    res.status = TilingResult::Status::BudgetExhausted;
    return res;
  }
  res.status = TilingResult::Status::Discrete;
  std::vector<Vec2> ring{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  for (const auto& l : lines) ring = clip(ring, l);
  ring = simplify_ring(ring);
  for (const auto& k : ring) {
    if (k.squaredNorm() < 1.0) res.tile.push_back(HPoint::from_klein(k));
  }
  check_tile(poly, res, lines);
  return res;
}

bool verify_indiscreteness(const IndiscretenessWitness& w) {
  if (w.kind == "irrational_angle") return w.angle_index >= 0;
  if (w.lines.size() == 2) {
    auto again = close_pair(w.lines[0], w.lines[1]);
    return again.has_value() && !same_line(w.lines[0], w.lines[1]);
  }
  if (w.element) {
    double tr = w.element->trace();
    bool proper = (*w.element - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9;
    if (w.kind == "small_glide") return proper && std::abs(tr - 1.0) < kIndiscreteTol * kIndiscreteTol;
    return proper && std::abs(tr - 3.0) < kIndiscreteTol * kIndiscreteTol;
  }
  return false;
}

RigidityVerdict classify(const LabeledPolygon& poly, const TilingBudget& budget) {
  RigidityVerdict v;
  AngleClassification ac = classify_angles(poly);
  const int n = poly.size();
  auto rigid = [&](const std::string& reason) {
    v.kind = RigidityVerdict::Kind::Rigid;
    v.reason = reason;
    return v;
  };
  if (ac.summary == AngleSummary::HasIrrational) return rigid("irrational_angle");
  if (n == 3 && is_good(poly)) {
    v.tile = poly.vertices();
    return rigid("triangle_tile");
  }
  if (n >= 4 && ac.summary == AngleSummary::AllEvenSubmultiple) {
    v.kind = RigidityVerdict::Kind::Flexible;
    v.reason = "all_even_submultiple";
    v.deformation_dim = n - 3;
    v.tile = poly.vertices();
    return v;
  }
  if (ac.summary == AngleSummary::NoneEvenSubmultiple) return rigid("no_even_submultiple");

  TilingResult t = tiling_closure(poly, budget);
  v.tiling = t;
  switch (t.status) {
    case TilingResult::Status::Indiscrete:
      return rigid("indiscrete_group");
    case TilingResult::Status::BudgetExhausted:
      v.kind = RigidityVerdict::Kind::Unknown;
      v.reason = "budget_exhausted";
      return v;
    case TilingResult::Status::Discrete:
      break;
  }
  if (!t.invariants_ok) {
    v.kind = RigidityVerdict::Kind::Unknown;
    v.reason = "tiling_invariants_failed";
    return v;
  }
  v.tile = t.tile;
  if (t.triangle) return rigid("triangle_tile");
  if (t.even_at_vertices) {
    v.kind = RigidityVerdict::Kind::Flexible;
    v.reason = "reflective_tiling";
    v.deformation_dim = static_cast<int>(t.tile.size()) - 3;
    return v;
  }
  v.kind = RigidityVerdict::Kind::Unknown;
  v.reason = "odd_tile_angle_at_vertex";
  return v;
}

GrammarSpec grammar_spec(const LabeledPolygon& poly) {
  GrammarSpec g;
  for (int s = 0; s < poly.size(); ++s) {
    const RationalAngle& a = poly.angle(s);
    auto r = a.rational();
    if (!r) throw GrammarUndefined("angle " + std::to_string(s + 1) + " is not a rational multiple of pi");
    if (r->first != 1) {
      throw GrammarUndefined("angle " + std::to_string(s + 1) + " is " + std::to_string(r->first) + "pi/" +
                             std::to_string(r->second) + ", not of the form pi/k");
    }
    g.k.push_back(r->second);
  }
  return g;
}

GrammarResult grammar_check(const GrammarSpec& spec, const BounceWord& word) {
  GrammarResult res;
  const int n = static_cast<int>(spec.k.size());
  for (size_t i = 1; i < word.size(); ++i) {
    if (word[i] == word[i - 1]) {
      res.admissible = false;
      res.position = static_cast<int>(i) + 1;
      res.rule = "repeat";
      return res;
    }
  }
  // Pair index j (0-based) when labels a, b are sides j+1 and j+2.
  auto pair_of = [&](int a, int b) -> int {
    if (b == a % n + 1) return a - 1;
    if (a == b % n + 1) return b - 1;
    return -1;
  };
  size_t i = 0;
  while (i + 1 < word.size()) {
    int j = pair_of(word[i], word[i + 1]);
    if (j < 0) {
      ++i;
      continue;
    }
    size_t end = i + 1;
    while (end + 1 < word.size() && word[end + 1] == word[end - 1]) ++end;
    long len = static_cast<long>(end - i + 1);
    if (len > spec.k[j]) {
      res.admissible = false;
      res.position = static_cast<int>(i + spec.k[j]) + 1;
      res.rule = "run";
      return res;
    }
    i = end;
  }
  return res;
}

}  // namespace hypb
