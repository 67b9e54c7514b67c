#pragma once

#include <cstdint>

#include "shortcutlab/partition.hpp"

namespace shortcutlab {

struct Demand {
  // (source, sink, amount); amounts must be > 0
  std::vector<std::tuple<NodeId, NodeId, double>> entries;
};

struct RoutedPath {
  double prob = 1.0;
  Walk path;
};

/// One path distribution per pair; dilation = longest support path.
struct RoutingScheme {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::vector<std::vector<RoutedPath>> dists;

  int dilation() const;
  void validate(const Graph& g) const;  // endpoints, probs sum to 1
};

// max over edges of sum_{pairs} demand * Pr[edge on sampled path], exact.
double scheme_congestion(const Graph& g, const RoutingScheme& r,
                         const Demand& d);

struct OptHResult {
  double value = 0;       // measured congestion of the witness
  double dual_lower = 0;  // valid lower bound on the fractional optimum
  RoutingScheme witness;  // dilation <= h
  int iterations = 0;
};

// Multiplicative-weights approximation of fractional min-congestion routing
// with an h-hop dilation budget. The witness congestion upper-bounds and
// dual_lower lower-bounds the fractional optimum.
OptHResult opt_h(const Graph& g, const Demand& d, int h, double eps = 0.05,
                 int max_iterations = 2000);

// One independent draw per pair from the scheme.
PairShortcut sample_shortcuts(const Graph& g, const RoutingScheme& r,
                              std::uint64_t seed);

enum class BaselineKind { Shortest, MwSpread };

// Shortest: one BFS path per pair. MwSpread: opt_h witness on unit demand.
RoutingScheme baseline_scheme(const Graph& g, const PairSet& pairs,
                              BaselineKind kind, int h);

}  // namespace shortcutlab
