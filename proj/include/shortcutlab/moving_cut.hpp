#pragma once

#include <cstdint>
#include <string>

#include "shortcutlab/graph.hpp"

namespace shortcutlab {

/// Positive integer edge lengths, one per EdgeId.
struct MovingCut {
  std::vector<int> ell;

  static MovingCut unit(const Graph& g) { return {std::vector<int>(g.m(), 1)}; }
};

// gamma = sum_e (ell_e - 1)
std::int64_t cut_capacity(const MovingCut& mc);

// min ell-distance between the full source set and the full sink set
std::int64_t cut_distance(const Graph& g, const MovingCut& mc,
                          const PairSet& pairs);

struct CutCheck {
  bool ok = false;
  std::int64_t capacity = 0;
  std::int64_t distance = 0;
  std::string reason;
};

// Valid iff all lengths >= 1 and capacity < k (the pair count).
CutCheck validate_cut(const Graph& g, const MovingCut& mc,
                      const PairSet& pairs);

/// Scale factor as an exact rational num/den >= 1 so the guarantees
/// capacity(scaled) <= gamma / c and distance(scaled) >= beta / (1 + c)
/// can be checked in integer arithmetic.
struct ScaleFactor {
  std::int64_t num = 1;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / den; }
};

// ell_hat = 1 + floor((ell - 1) / c), computed exactly.
MovingCut scale_cut(const MovingCut& mc, ScaleFactor c);

// Repair schedule 1, 1.5, 2, 3, 4, 6, 8, ... (alternating x1.5 and x4/3).
ScaleFactor scale_schedule(int index);

struct CutSearchResult {
  MovingCut cut;
  std::int64_t beta = 0;           // recomputed distance of the integer cut
  std::int64_t capacity = 0;
  double fractional_beta = 0;      // upper bound on MC(S) (lp mode)
  int iterations = 0;
  bool converged = true;
  ScaleFactor repair{1, 1};        // capacity repair applied after rounding
};

// Exhaustive search over integer cuts with ell_e <= l_max and capacity < k;
// feasible only for small graphs (throws beyond m = 16 edges).
CutSearchResult search_cut_exact(const Graph& g, const PairSet& pairs,
                                 int l_max = 4);

struct LpSearchOptions {
  int max_iterations = 500;
  int max_rows = 64;        // master constraint cap; worst-slack rows drop
  int batch = 8;            // violated paths added per separation round
  double tolerance = 1e-6;
};

// Cutting-plane LP: maximize t subject to ell(p) >= t over source-sink
// paths (grown by ell-shortest-path separation) and the capacity budget
// sum (ell_e - 1) <= k - 1. Returns a valid integer cut (rounded, then
// capacity-repaired via scale_cut) plus the master optimum, which upper
// bounds MC(S).
CutSearchResult search_cut_lp(const Graph& g, const PairSet& pairs,
                              const LpSearchOptions& opts = {});

// Lower-bound estimate of MC(G): the best beta found over candidate pair
// sets (a maximally distant pair under unit lengths, plus sampled
// connectable pair sets run through the lp search).
struct McEstimate {
  std::int64_t beta = 0;
  int pair_count = 0;  // pair set size achieving the estimate
};

McEstimate mc_of_graph_estimate(const Graph& g, std::uint64_t seed,
                                int trials = 4);

}  // namespace shortcutlab
