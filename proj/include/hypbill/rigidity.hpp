#pragma once

#include "hypbill/unfolding.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace hypb {

inline constexpr double kLineDedupTol = 1e-6;
inline constexpr double kIndiscreteTol = 1e-4;

struct TilingBudget {
  int max_word_len = 12;
  double region_margin = 2.0;
  long max_elements = 400000;
};

struct IndiscretenessWitness {
  /// "irrational_angle", "close_crossing", "close_ultraparallel",
  /// "asymptotic_lines", "small_rotation", "small_translation", "small_glide"
  std::string kind;
  std::vector<Vec3> lines;
  /// Matrix of the offending element when the witness is an element.
  std::optional<Mat3> element;
  double value = 0.0;
  int angle_index = -1;
};

struct TilingResult {
  enum class Status { Discrete, Indiscrete, BudgetExhausted };
  Status status = Status::BudgetExhausted;

  // Discrete
  std::vector<HPoint> tile;
  std::vector<long> tile_k;  // tile angle i is pi / tile_k[i]
  bool triangle = false;
  int tiles_in_P = 0;
  bool even_at_vertices = false;
  bool invariants_ok = false;
  std::vector<std::string> invariant_failures;

  // Indiscrete
  std::optional<IndiscretenessWitness> witness;

  // Diagnostics
  int depth = 0;
  long elements = 0;
  /// In-region mirror lines at the final depth, canonically ordered.
  std::vector<Vec3> lines;
};

std::string to_string(TilingResult::Status s);

TilingResult tiling_closure(const LabeledPolygon& poly, const TilingBudget& budget = {});

/// Re-checks an indiscreteness witness from its recorded lines or element.
bool verify_indiscreteness(const IndiscretenessWitness& w);

struct RigidityVerdict {
  enum class Kind { Rigid, Flexible, Unknown };
  Kind kind = Kind::Unknown;
  /// Rigid: "irrational_angle", "no_even_submultiple", "triangle_tile",
  /// "indiscrete_group". Flexible: "all_even_submultiple", "reflective_tiling".
  /// Unknown: "budget_exhausted", "tiling_invariants_failed".
  std::string reason;
  int deformation_dim = 0;
  std::vector<HPoint> tile;
  std::optional<TilingResult> tiling;
};

std::string to_string(RigidityVerdict::Kind k);

RigidityVerdict classify(const LabeledPolygon& poly, const TilingBudget& budget = {});

class GrammarUndefined : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

struct GrammarSpec {
  /// k[j] for the pair of labels (j+1, j+2), indices mod n: the angle between
  /// those sides is pi / k[j].
  std::vector<long> k;
};

/// Throws GrammarUndefined unless every angle is pi/k.
GrammarSpec grammar_spec(const LabeledPolygon& poly);

struct GrammarResult {
  bool admissible = true;
  int position = 0;  // 1-based index of the first offending letter
  std::string rule;  // "repeat" or "run"
};

GrammarResult grammar_check(const GrammarSpec& spec, const BounceWord& word);

struct CompareConfig {
  int samples = 200;
  int word_len = 40;
  std::uint64_t seed = 1;
  int diagonal_len = 0;
  int threads = 0;  // 0: hardware concurrency
  bool stop_at_first = false;
};

struct SideStats {
  int tested = 0;
  int mutual = 0;
  int one_sided = 0;
  int grazing_discards = 0;
  int vertex_hit_discards = 0;
  int unsampled = 0;
};

struct ComparisonReport {
  CompareConfig config;
  SideStats from_p1;  // words of P1 checked in P2
  SideStats from_p2;
  std::optional<BounceWord> first_distinguishing;
  /// "p1" when the word comes from P1 and fails in P2.
  std::string distinguishing_from;
  bool diagonals_compared = false;
  bool diagonals_equal = true;
  long diagonals_p1 = 0;
  long diagonals_p2 = 0;
  std::vector<BounceWord> diagonals_only_p1;
  std::vector<BounceWord> diagonals_only_p2;
  int one_sided_total() const { return from_p1.one_sided + from_p2.one_sided; }
};

ComparisonReport compare(const LabeledPolygon& p1, const LabeledPolygon& p2, const CompareConfig& cfg);

/// Uniform double in [0, 1) from a 64-bit draw, fixed across platforms.
double u01(std::uint64_t bits);

/// Random interior start and direction; returns false if none was found.
bool sample_start(const LabeledPolygon& poly, std::mt19937_64& rng, HPoint& start, double& theta);

}  // namespace hypb
