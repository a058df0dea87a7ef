// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace hypb;
using namespace testing_support;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

BounceWord random_word(std::mt19937_64& rng, int n, int len) {
  BounceWord w;
  while (static_cast<int>(w.size()) < len) {
    int b = static_cast<int>(rng() % n) + 1;
    if (!w.empty() && w.back() == b) continue;
    w.push_back(b);
  }
  return w;
}

Outcome orbifold_table() {
  struct Row {
    std::vector<int> orders;
    double expect;
  };
  std::vector<Row> rows = {{{2, 3, 7}, M_PI / 21}, {{2, 3, 8}, M_PI / 12}, {{2, 4, 6}, M_PI / 6}, {{2, 2, 2, 4}, M_PI / 2}};
  std::ostringstream os;
  bool ok = true;
  for (const auto& r : rows) {
    double a = orbifold_area({0, r.orders});
    double err = std::abs(a - r.expect);
    ok = ok && err < 1e-12;
    os << "(0;";
    for (size_t i = 0; i < r.orders.size(); ++i) os << (i ? "," : "") << r.orders[i];
    os << ") err " << err << "  ";
  }
  return {ok, os.str()};
}

Outcome octagon_example() {
  BranchedCoverData c;
  c.surface = {2, {PiAngle::fraction(4, 1)}};
  c.orbifold = {0, {2, 2, 2, 4}};
  c.degree = 4;
  c.fibres = {{0, {{0, 4}}}, {1, {{-1, 2}, {-1, 2}}}, {2, {{-1, 2}, {-1, 2}}}, {3, {{-1, 4}}}};
  CoverReport rep = validate_cover(c);
  if (!rep.valid) return {false, "cover rejected: " + rep.failures.front()};
  BoundReport b = bound_check(c);
  bool ok = std::abs(rep.surface_area - 2 * M_PI) < 1e-10 && std::abs(rep.orbifold_area - M_PI / 2) < 1e-10 &&
            std::abs(rep.surface_area - 4 * rep.orbifold_area) < 1e-10 && b.k == 1 &&
            std::abs(b.rhs - 32.0 / 3.0) < 1e-10 && b.bound == 32.0 && b.holds;
  std::ostringstream os;
  os << "area " << rep.surface_area << " = 4 x " << rep.orbifold_area << ", k = " << b.k << " < " << b.rhs
     << " <= " << b.bound;
  return {ok, os.str()};
}

Outcome flexible_pair() {
  CompareConfig cfg;
  cfg.samples = 200;
  cfg.word_len = 40;
  cfg.seed = 7;
  cfg.diagonal_len = 6;
  ComparisonReport r = compare(right_pentagon(0.9, 1.2), right_pentagon(1.3, 0.8), cfg);
  int tested = r.from_p1.tested + r.from_p2.tested;
  bool ok = r.one_sided_total() == 0 && r.diagonals_compared && r.diagonals_equal && r.from_p1.tested > 0 &&
            r.from_p2.tested > 0;
  std::ostringstream os;
  os << tested << " words tested, " << r.one_sided_total() << " one-sided, "
     << r.from_p1.grazing_discards + r.from_p2.grazing_discards << " grazing; diagonals " << r.diagonals_p1 << " vs "
     << r.diagonals_p2 << (r.diagonals_equal ? " (equal)" : " (differ)");
  return {ok, os.str()};
}

Outcome rigid_pair() {
  LabeledPolygon p1 = pentagon(3, 2.0, 2.3), p2 = pentagon(3, 2.2, 2.5);
  CompareConfig cfg;
  cfg.samples = 500;
  cfg.seed = 7;
  cfg.stop_at_first = true;
  ComparisonReport r;
  for (int len : {40, 80}) {
    cfg.word_len = len;
    r = compare(p1, p2, cfg);
    if (r.first_distinguishing) break;
  }
  if (!r.first_distinguishing) return {false, "no one-sided word at length 40 or 80"};
  const BounceWord& w = *r.first_distinguishing;
  const LabeledPolygon& home = r.distinguishing_from == "p1" ? p1 : p2;
  const LabeledPolygon& other = r.distinguishing_from == "p1" ? p2 : p1;

  // Shortest factor that fails in the other polygon; any factor of a bounce
  // word is a bounce word, so this certifies the whole word.
  BounceWord factor;
  for (size_t len = 1; len <= w.size() && factor.empty(); ++len) {
    for (size_t s = 0; s + len <= w.size(); ++s) {
      BounceWord f(w.begin() + s, w.begin() + s + len);
      if (realizable(other, f).verdict == Verdict::No) {
        factor = f;
        break;
      }
    }
  }
  if (factor.empty()) return {false, "no failing factor of " + format_word(w)};

  std::ostringstream os;
  os << "word of length " << w.size() << " from " << r.distinguishing_from << "; shortest failing factor "
     << format_word(factor) << " (m = " << factor.size() << ")";
  bool ok = realizable(home, factor).verdict == Verdict::Yes;
  // Grid oracle on the factor and on every truncation to at most four letters
  // that the engine calls No.
  oracle::GridVerdict g = oracle::grid_realizable(disk_vertices(other), factor);
  oracle::GridVerdict h = oracle::grid_realizable(disk_vertices(home), factor);
  ok = ok && !g.feasible && h.feasible;
  os << "; oracle slack " << g.best << " in other, " << h.best << " in home";
  int checked = 0;
  for (size_t m = 1; m <= std::min<size_t>(4, factor.size()); ++m) {
    for (size_t s = 0; s + m <= factor.size(); ++s) {
      BounceWord t(factor.begin() + s, factor.begin() + s + m);
      Realizability rr = realizable(other, t);
      if (rr.verdict == Verdict::Grazing) continue;
      if (rr.verdict == Verdict::Yes && rr.margin < 1e-6) continue;
      oracle::GridVerdict gt = oracle::grid_realizable(disk_vertices(other), t);
      if (std::abs(gt.best) < 1e-6) continue;
      ok = ok && (gt.feasible == (rr.verdict == Verdict::Yes));
      ++checked;
    }
  }
  os << "; " << checked << " short truncations agree";
  return {ok, os.str()};
}

Outcome classification() {
  auto t0 = Clock::now();
  std::ostringstream os;
  bool ok = true;
  auto expect = [&](const std::string& name, const LabeledPolygon& p, RigidityVerdict::Kind kind,
                    const std::string& reason, int dim) {
    RigidityVerdict v = classify(p);
    bool hit = v.kind == kind && (reason.empty() || v.reason == reason) &&
               (kind != RigidityVerdict::Kind::Flexible || v.deformation_dim == dim);
    ok = ok && hit;
    os << name << " " << to_string(v.kind) << "(" << v.reason << ")" << (hit ? "" : " UNEXPECTED") << "  ";
  };
  expect("triangle", triangle_2_3_7(), RigidityVerdict::Kind::Rigid, "triangle_tile", 0);
  expect("right pentagon", right_pentagon(), RigidityVerdict::Kind::Flexible, "", 2);
  expect("irrational quad", irrational_quad(), RigidityVerdict::Kind::Rigid, "irrational_angle", 0);
  expect("pi/3 pentagon", pentagon(3, 2.0, 2.3), RigidityVerdict::Kind::Rigid, "", 0);
  double secs = seconds_since(t0);
  os << secs << " s";
  return {ok && secs < 30.0, os.str()};
}

// Each suite returns (cases, failures).
struct Suite {
  std::string name;
  std::function<std::pair<int, int>()> run;
};

Outcome invariants() {
  auto zoo = polygon_zoo();
  std::vector<Suite> suites;
  suites.push_back({"isometry", [] {
                      std::mt19937_64 rng(101);
                      int bad = 0;
                      for (int i = 0; i < 200; ++i) {
                        HIsometry m = random_isometry(rng);
                        HPoint p = random_point(rng), q = random_point(rng);
                        bad += !(std::abs(distance(m.apply(p), m.apply(q)) - distance(p, q)) < 1e-8);
                      }
                      return std::make_pair(200, bad);
                    }});
  suites.push_back({"involution", [] {
                      std::mt19937_64 rng(103);
                      int bad = 0;
                      for (int i = 0; i < 200; ++i) {
                        HIsometry r = reflect(random_geodesic(rng));
                        bad += !(((r * r).matrix() - Mat3::Identity()).norm() < 1e-9);
                      }
                      return std::make_pair(200, bad);
                    }});
  suites.push_back({"reflection law", [&] {
                      std::mt19937_64 rng(107);
                      int cases = 0, bad = 0;
                      for (int i = 0; cases < 150 && i < 2000; ++i) {
                        const LabeledPolygon& p = zoo[i % zoo.size()];
                        Trajectory t;
                        if (!random_run(p, rng, 30, t)) continue;
                        ++cases;
                        for (const auto& e : t.events) {
                          const Vec3& n = p.side(e.side_label - 1).normal();
                          bad += !(std::abs(minkowski(e.incoming, n) + minkowski(e.outgoing, n)) < 1e-8);
                        }
                      }
                      return std::make_pair(cases, bad);
                    }});
  suites.push_back({"self-realizability", [&] {
                      std::mt19937_64 rng(109);
                      int cases = 0, bad = 0;
                      for (int i = 0; cases < 150 && i < 2000; ++i) {
                        const LabeledPolygon& p = zoo[i % zoo.size()];
                        Trajectory t;
                        if (!random_run(p, rng, 1 + static_cast<int>(rng() % 40), t)) continue;
                        RealizeOptions opts;
                        opts.hint = &t;
                        Realizability r = realizable(p, bounce_word(t), opts);
                        if (r.verdict == Verdict::Grazing) continue;
                        ++cases;
                        bad += r.verdict != Verdict::Yes;
                      }
                      return std::make_pair(cases, bad);
                    }});
  suites.push_back({"no immediate repeat", [&] {
                      std::mt19937_64 rng(113);
                      int cases = 0, bad = 0;
                      for (int i = 0; cases < 150 && i < 2000; ++i) {
                        Trajectory t;
                        if (!random_run(zoo[i % zoo.size()], rng, 60, t)) continue;
                        ++cases;
                        BounceWord w = bounce_word(t);
                        for (size_t k = 1; k < w.size(); ++k) bad += w[k] == w[k - 1];
                      }
                      return std::make_pair(cases, bad);
                    }});
  suites.push_back({"grammar", [&] {
                      std::vector<LabeledPolygon> good;
                      for (const auto& p : zoo)
                        if (is_good(p)) good.push_back(p);
                      std::mt19937_64 rng(127);
                      int cases = 0, bad = 0;
                      for (int i = 0; cases < 150 && i < 2000; ++i) {
                        const LabeledPolygon& p = good[i % good.size()];
                        Trajectory t;
                        if (!random_run(p, rng, 60, t)) continue;
                        ++cases;
                        bad += !grammar_check(grammar_spec(p), bounce_word(t)).admissible;
                      }
                      return std::make_pair(cases, bad);
                    }});
  suites.push_back({"reversal", [&] {
                      std::mt19937_64 rng(131);
                      int cases = 0, bad = 0;
                      for (int i = 0; cases < 150 && i < 2000; ++i) {
                        const LabeledPolygon& p = zoo[i % zoo.size()];
                        BounceWord w = random_word(rng, p.size(), 1 + static_cast<int>(rng() % 8));
                        Realizability a = realizable(p, w), b = realizable(p, reversed(w));
                        if (a.verdict == Verdict::Grazing || b.verdict == Verdict::Grazing) continue;
                        ++cases;
                        bad += a.verdict != b.verdict;
                      }
                      return std::make_pair(cases, bad);
                    }});
  suites.push_back({"grid oracle", [&] {
                      std::mt19937_64 rng(137);
                      int cases = 0, bad = 0;
                      for (int i = 0; cases < 150 && i < 3000; ++i) {
                        const LabeledPolygon& p = zoo[i % zoo.size()];
                        BounceWord w = random_word(rng, p.size(), 1 + static_cast<int>(rng() % 4));
                        Realizability r = realizable(p, w);
                        if (r.verdict == Verdict::Grazing) continue;
                        if (r.verdict == Verdict::Yes && r.margin < 1e-6) continue;
                        oracle::GridVerdict g = oracle::grid_realizable(disk_vertices(p), w);
                        if (std::abs(g.best) < 1e-6) continue;
                        ++cases;
                        bad += (r.verdict == Verdict::Yes) != g.feasible;
                      }
                      return std::make_pair(cases, bad);
                    }});
  suites.push_back({"cover bound", [] {
                      std::mt19937_64 rng(139);
                      int cases = 0, bad = 0;
                      for (long i = 0; cases < 1000 && i < 5000000; ++i) {
                        auto c = random_cover(rng);
                        if (!c) continue;
                        ++cases;
                        if (!validate_cover(*c).valid) {
                          ++bad;
                          continue;
                        }
                        bad += !bound_check(*c).holds;
                      }
                      return std::make_pair(cases, bad);
                    }});
  bool ok = true;
  std::ostringstream os;
  for (const auto& s : suites) {
    auto [cases, bad] = s.run();
    ok = ok && cases >= 100 && bad == 0;
    os << s.name << " " << cases - bad << "/" << cases << "  ";
  }
  return {ok, os.str()};
}

Outcome closure_fidelity() {
  DeformationParams params;
  params.target_angles.assign(5, RationalAngle::fraction(1, 2));
  params.free_lengths = {std::acosh(kPhi), std::acosh(kPhi)};
  LabeledPolygon p = solve_closure(params);
  double d = aligned_distance(p, build_regular(5, RationalAngle::fraction(1, 2)));
  std::ostringstream os;
  os << "max vertex distance " << d;
  return {d < 1e-7, os.str()};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"orbifold area table", orbifold_table},
      {"octagon cover example", octagon_example},
      {"flexible pentagons share bounce data", flexible_pair},
      {"rigid pentagons are distinguished", rigid_pair},
      {"classification suite", classification},
      {"invariant suites", invariants},
      {"closure solver fidelity", closure_fidelity},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu %-40s %s  [%.1f s] %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
