#include "support.hpp"

#include <doctest.h>

using namespace hypb;
using namespace testing_support;

namespace {

LabeledPolygon mixed_quad() {
  // Angles pi/2, pi/3, pi/2, pi/3 with one free side.
  DeformationParams params;
  params.target_angles = {RationalAngle::fraction(1, 2), RationalAngle::fraction(1, 3), RationalAngle::fraction(1, 2),
                          RationalAngle::fraction(1, 3)};
  params.free_lengths = {1.6};
  return solve_closure(params);
}

}  // namespace

TEST_CASE("classification cascade examples") {
  RigidityVerdict t = classify(triangle_2_3_7());
  CHECK(t.kind == RigidityVerdict::Kind::Rigid);
  CHECK(t.reason == "triangle_tile");
  CHECK(t.tile.size() == 3);

  RigidityVerdict r = classify(right_pentagon());
  CHECK(r.kind == RigidityVerdict::Kind::Flexible);
  CHECK(r.reason == "all_even_submultiple");
  CHECK(r.deformation_dim == 2);
  CHECK(r.tile.size() == 5);

  RigidityVerdict q = classify(irrational_quad());
  CHECK(q.kind == RigidityVerdict::Kind::Rigid);
  CHECK(q.reason == "irrational_angle");

  for (auto p : {pentagon(3, 2.0, 2.3), pentagon(3, 2.2, 2.5)}) {
    RigidityVerdict v = classify(p);
    CHECK(v.kind == RigidityVerdict::Kind::Rigid);
    CHECK(v.reason == "no_even_submultiple");
  }
}

TEST_CASE("tiling closure examples") {
  TilingResult r = tiling_closure(right_pentagon());
  REQUIRE(r.status == TilingResult::Status::Discrete);
  CHECK_FALSE(r.triangle);
  CHECK(r.tiles_in_P == 1);
  CHECK(r.even_at_vertices);
  CHECK(r.invariants_ok);
  CHECK(r.tile.size() == 5);

  TilingResult q = tiling_closure(irrational_quad());
  REQUIRE(q.status == TilingResult::Status::Indiscrete);
  REQUIRE(q.witness);
  CHECK(q.witness->kind == "irrational_angle");
  CHECK(q.witness->angle_index == 0);

  TilingResult t = tiling_closure(pentagon(3, 2.0, 2.3));
  CHECK(t.status == TilingResult::Status::Indiscrete);
}

TEST_CASE("cascade and closure agree when both decide") {
  std::vector<LabeledPolygon> polys = {right_pentagon(), right_pentagon(1.3, 0.8), build_regular(5, RationalAngle::fraction(1, 2)),
                                       build_regular(6, RationalAngle::fraction(1, 2)), pentagon(3, 2.0, 2.3),
                                       pentagon(3, 2.2, 2.5)};
  for (const auto& p : polys) {
    RigidityVerdict v = classify(p);
    TilingResult t = tiling_closure(p);
    if (t.status == TilingResult::Status::BudgetExhausted) continue;
    bool closure_flexible = t.status == TilingResult::Status::Discrete && !t.triangle && t.even_at_vertices;
    CHECK((v.kind == RigidityVerdict::Kind::Flexible) == closure_flexible);
  }
}

TEST_CASE("mixed angles go through the closure") {
  LabeledPolygon p = mixed_quad();
  REQUIRE(validate(p).ok());
  CHECK(classify_angles(p).summary == AngleSummary::Mixed);
  RigidityVerdict v = classify(p);
  REQUIRE(v.tiling);
  if (v.kind == RigidityVerdict::Kind::Flexible) CHECK(v.deformation_dim >= 1);
  if (v.reason == "triangle_tile") CHECK(v.tile.size() == 3);
  if (v.kind == RigidityVerdict::Kind::Unknown) CHECK(v.reason.size() > 0);
}

TEST_CASE("closure is deterministic") {
  TilingResult a = tiling_closure(right_pentagon()), b = tiling_closure(right_pentagon());
  REQUIRE(a.lines.size() == b.lines.size());
  for (size_t i = 0; i < a.lines.size(); ++i) CHECK((a.lines[i] - b.lines[i]).norm() == 0.0);
  TilingResult c = tiling_closure(pentagon(3, 2.0, 2.3)), d = tiling_closure(pentagon(3, 2.0, 2.3));
  CHECK(c.status == d.status);
  CHECK(c.depth == d.depth);
  CHECK(c.elements == d.elements);
}

TEST_CASE("indiscreteness witnesses re-check") {
  for (auto p : {pentagon(3, 2.0, 2.3), pentagon(3, 2.2, 2.5), irrational_quad()}) {
    TilingResult t = tiling_closure(p);
    REQUIRE(t.status == TilingResult::Status::Indiscrete);
    REQUIRE(t.witness);
    CHECK(verify_indiscreteness(*t.witness));
    const auto& w = *t.witness;
    if (w.lines.size() == 2) {
      // Nearly concurrent, nearly asymptotic or nearly tangent: |<n1, n2>| is close to 1.
      double c = std::abs(minkowski(w.lines[0], w.lines[1]));
      CHECK(std::abs(c - 1.0) < 1e-7);
      CHECK(std::min((w.lines[0] - w.lines[1]).norm(), (w.lines[0] + w.lines[1]).norm()) > 1e-7);
    }
  }
}

TEST_CASE("grammar examples") {
  GrammarSpec oct = grammar_spec(build_regular(8, RationalAngle::fraction(1, 4)));
  CHECK(oct.k[0] == 4);
  GrammarResult r = grammar_check(oct, {1, 2, 1, 2, 1});
  CHECK_FALSE(r.admissible);
  CHECK(r.rule == "run");
  CHECK(r.position == 5);
  CHECK(grammar_check(oct, {1, 2, 1, 2}).admissible);

  GrammarSpec pent = grammar_spec(right_pentagon());
  GrammarResult rep = grammar_check(pent, {2, 1, 1});
  CHECK_FALSE(rep.admissible);
  CHECK(rep.rule == "repeat");
  CHECK(rep.position == 3);
  CHECK(grammar_check(pent, {1, 3, 1, 3}).admissible);
  // Sides 5 and 1 meet at a right angle too.
  CHECK_FALSE(grammar_check(pent, {5, 1, 5}).admissible);
  CHECK(grammar_check(pent, {5, 1}).admissible);

  CHECK_THROWS_AS(grammar_spec(irrational_quad()), GrammarUndefined);
}

TEST_CASE("simulated words satisfy the grammar") {
  std::vector<LabeledPolygon> good = {right_pentagon(), right_pentagon(1.3, 0.8), triangle_2_3_7(),
                                      build_regular(8, RationalAngle::fraction(1, 4)), pentagon(3, 2.0, 2.3)};
  std::mt19937_64 rng(53);
  int runs = 0;
  for (int i = 0; i < 300; ++i) {
    const LabeledPolygon& p = good[i % good.size()];
    Trajectory t;
    if (!random_run(p, rng, 60, t)) continue;
    ++runs;
    GrammarResult g = grammar_check(grammar_spec(p), bounce_word(t));
    CHECK(g.admissible);
  }
  CHECK(runs >= 100);
}

TEST_CASE("compare with itself") {
  CompareConfig cfg;
  cfg.samples = 30;
  cfg.word_len = 20;
  cfg.seed = 5;
  cfg.diagonal_len = 3;
  LabeledPolygon p = right_pentagon();
  ComparisonReport r = compare(p, p, cfg);
  CHECK(r.one_sided_total() == 0);
  CHECK(r.diagonals_compared);
  CHECK(r.diagonals_equal);
  CHECK_FALSE(r.first_distinguishing);
  CHECK(r.from_p1.tested + r.from_p1.grazing_discards + r.from_p1.unsampled >= 30);
}

TEST_CASE("compare is deterministic and thread independent") {
  CompareConfig cfg;
  cfg.samples = 40;
  cfg.word_len = 30;
  cfg.seed = 7;
  cfg.threads = 1;
  LabeledPolygon a = pentagon(3, 2.0, 2.3), b = pentagon(3, 2.2, 2.5);
  ComparisonReport r1 = compare(a, b, cfg);
  cfg.threads = 4;
  ComparisonReport r2 = compare(a, b, cfg);
  CHECK(r1.from_p1.one_sided == r2.from_p1.one_sided);
  CHECK(r1.from_p2.one_sided == r2.from_p2.one_sided);
  CHECK(r1.first_distinguishing == r2.first_distinguishing);
  CHECK(r1.one_sided_total() > 0);
}

TEST_CASE("u01 is in range") {
  CHECK(u01(0) == 0.0);
  CHECK(u01(~std::uint64_t{0}) < 1.0);
}
