#include "hypbill/rigidity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace hypb {

double u01(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

bool sample_start(const LabeledPolygon& poly, std::mt19937_64& rng, HPoint& start, double& theta) {
  Vec2 lo(1, 1), hi(-1, -1);
  for (const auto& v : poly.vertices()) {
    Vec2 k = to_klein(v);
    lo = lo.cwiseMin(k);
    hi = hi.cwiseMax(k);
  }
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Vec2 k(lo.x() + (hi.x() - lo.x()) * u01(rng()), lo.y() + (hi.y() - lo.y()) * u01(rng()));
    if (k.squaredNorm() >= 1.0) continue;
    HPoint p = HPoint::from_klein(k);
    if (!poly.contains(p) || poly.boundary_distance(p) <= 1e-6) continue;
    start = p;
    theta = 2.0 * M_PI * u01(rng());
    return true;
  }
  return false;
}

namespace {

enum class Outcome { Mutual, OneSided, Unsampled };

struct SlotResult {
  Outcome outcome = Outcome::Unsampled;
  BounceWord word;
  int grazing = 0;
  int vertex_hits = 0;
};

SlotResult run_slot(const LabeledPolygon& own, const LabeledPolygon& other, const CompareConfig& cfg, int side,
                    int slot) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(side), static_cast<std::uint32_t>(slot)};
  std::mt19937_64 rng(seq);
  SlotResult r;
  for (int attempt = 0; attempt < 64; ++attempt) {
    HPoint start;
    double theta = 0.0;
    if (!sample_start(own, rng, start, theta)) break;
    Trajectory tr = simulate_angle(own, start, theta, cfg.word_len);
    if (tr.vertex_hit) {
      ++r.vertex_hits;
      continue;
    }
    BounceWord w = bounce_word(tr);
    RealizeOptions opts;
    opts.hint = &tr;
    if (realizable(own, w, opts).verdict != Verdict::Yes) {
      ++r.grazing;
      continue;
    }
    Realizability there = realizable(other, w);
    if (there.verdict == Verdict::Grazing) {
      ++r.grazing;
      continue;
    }
    r.word = w;
    r.outcome = there.verdict == Verdict::Yes ? Outcome::Mutual : Outcome::OneSided;
    return r;
  }
  return r;
}

template <class F>
void parallel_for(int count, int threads, F&& f) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

ComparisonReport compare(const LabeledPolygon& p1, const LabeledPolygon& p2, const CompareConfig& cfg) {
  ComparisonReport rep;
  rep.config = cfg;
  if (p1.size() != p2.size()) throw GeometryError("polygons have different numbers of sides");
  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  const int total = 2 * cfg.samples;
  std::vector<SlotResult> results(total);
  // Fixed batch boundaries keep early stopping independent of thread count.
  const int batch = cfg.stop_at_first ? 16 : total;
  std::optional<std::pair<int, BounceWord>> first;
  int done = 0;
  while (done < total) {
    int end = std::min(total, done + batch);
    parallel_for(end - done, threads, [&](int k) {
      int idx = done + k;
      // Interleave the two sides so early stopping samples both.
      int side = idx % 2;
      int slot = idx / 2;
      results[idx] = side == 0 ? run_slot(p1, p2, cfg, 0, slot) : run_slot(p2, p1, cfg, 1, slot);
    });
    bool found = false;
    for (int idx = done; idx < end; ++idx) found |= results[idx].outcome == Outcome::OneSided;
    done = end;
    if (cfg.stop_at_first && found) break;
  }
  for (int idx = 0; idx < done; ++idx) {
    const SlotResult& r = results[idx];
    SideStats& st = idx % 2 == 0 ? rep.from_p1 : rep.from_p2;
    st.grazing_discards += r.grazing;
    st.vertex_hit_discards += r.vertex_hits;
    switch (r.outcome) {
      case Outcome::Mutual:
        ++st.tested;
        ++st.mutual;
        break;
      case Outcome::OneSided:
        ++st.tested;
        ++st.one_sided;
        break;
      case Outcome::Unsampled:
        ++st.unsampled;
        break;
    }
  }
  // First distinguishing word: P1's slots first, then P2's.
  for (int side = 0; side < 2 && !rep.first_distinguishing; ++side) {
    for (int idx = side; idx < done; idx += 2) {
      if (results[idx].outcome == Outcome::OneSided) {
        rep.first_distinguishing = results[idx].word;
        rep.distinguishing_from = side == 0 ? "p1" : "p2";
        break;
      }
    }
  }

  if (cfg.diagonal_len > 0) {
    rep.diagonals_compared = true;
    auto d1 = enumerate_diagonals(p1, cfg.diagonal_len).words;
    auto d2 = enumerate_diagonals(p2, cfg.diagonal_len).words;
    rep.diagonals_p1 = static_cast<long>(d1.size());
    rep.diagonals_p2 = static_cast<long>(d2.size());
    std::set_difference(d1.begin(), d1.end(), d2.begin(), d2.end(), std::back_inserter(rep.diagonals_only_p1),
                        word_less);
    std::set_difference(d2.begin(), d2.end(), d1.begin(), d1.end(), std::back_inserter(rep.diagonals_only_p2),
                        word_less);
    rep.diagonals_equal = rep.diagonals_only_p1.empty() && rep.diagonals_only_p2.empty();
  }
  return rep;
}

}  // namespace hypb
