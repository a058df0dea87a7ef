#pragma once

#include "hypbill/billiards.hpp"

#include <boost/multiprecision/float128.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hypb {

/// Quad precision. Long corridors need about L/2 extra bits of headroom in a
/// chart centred on the middle copy, where L is the corridor length.
using Wide = boost::multiprecision::float128;

inline constexpr double kGateEps = 1e-9;
inline constexpr int kMaxDiagonalLength = 12;

class ImmediateRepeat : public GeometryError {
 public:
  /// `position` is the 1-based index of the second of the two equal letters.
  explicit ImmediateRepeat(int position)
      : GeometryError("immediate repeat at position " + std::to_string(position)), position(position) {}
  int position;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Corridor {
  BounceWord word;
  /// g_0 = id, g_i = g_{i-1} * (reflection in side b_i).
  std::vector<HIsometry> copies;
  /// Gate i (0-based) is side b_{i+1} of copy i, as a Klein segment.
  std::vector<KleinChord> gates;
  std::vector<Vec2> vertices0;
  std::vector<Vec2> verticesM;
};

/// Throws ImmediateRepeat, or GeometryError for labels out of range.
Corridor unfold(const LabeledPolygon& poly, const BounceWord& word);

enum class Verdict { Yes, No, Grazing };
std::string to_string(Verdict v);

struct TransversalWitness {
  /// Klein chord of the line in the frame of copy 0 (double precision; for
  /// long corridors this is for display only).
  KleinChord chord;
  /// Signed arc-length positions of the gate crossings along the line.
  std::vector<double> crossing_params;
  /// Minimum hyperbolic distance from a gate endpoint to the line.
  double margin = 0.0;
  /// Copy whose frame `normal` is expressed in.
  int chart = 0;
  std::array<Wide, 3> normal{};
};

struct Realizability {
  Verdict verdict = Verdict::No;
  std::optional<TransversalWitness> witness;
  double margin = 0.0;
  std::string reason;
};

struct RealizeOptions {
  /// Trajectory that produced the word, if any; its geodesic is added to
  /// the candidate set.
  const Trajectory* hint = nullptr;
};

Realizability realizable(const LabeledPolygon& poly, const BounceWord& word, const RealizeOptions& opts = {});

/// Re-checks a witness against a freshly built corridor.
bool verify_witness(const LabeledPolygon& poly, const BounceWord& word, const TransversalWitness& w);

struct DiagonalResult {
  bool found = false;
  /// 0-based vertex indices: `from` in copy 0, `to` in the last copy.
  int from_vertex = -1;
  int to_vertex = -1;
  KleinChord chord;
  double margin = 0.0;
  std::string reason;
};

DiagonalResult generalized_diagonal(const LabeledPolygon& poly, const BounceWord& word);

struct DiagonalEnumeration {
  std::vector<BounceWord> words;
  long nodes = 0;
};

/// Words sorted by (length, lexicographic).
DiagonalEnumeration enumerate_diagonals(const LabeledPolygon& poly, int max_len, long node_budget = 400000);

bool word_less(const BounceWord& a, const BounceWord& b);

}  // namespace hypb
