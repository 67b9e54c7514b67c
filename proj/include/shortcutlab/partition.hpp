#pragma once

#include <functional>

#include "shortcutlab/graph.hpp"

namespace shortcutlab {

/// Disjoint nonempty node sets, each connected in its induced subgraph.
struct Partition {
  std::vector<std::vector<NodeId>> parts;

  int k() const { return static_cast<int>(parts.size()); }
  void validate(const Graph& g) const;  // throws GraphError
  std::vector<int> part_of(const Graph& g) const;
};

/// Per-part augmenting edge sets H_i (edges of the host graph).
struct Shortcut {
  std::vector<std::vector<EdgeId>> per_part;
};

/// One path per (s_i, t_i) pair.
struct PairShortcut {
  std::vector<Walk> paths;
};

struct ShortcutQuality {
  int congestion = 0;
  int dilation = 0;
  bool finite = true;  // false when some part stays disconnected
  int quality() const { return congestion + dilation; }
};

// congestion: max over edges of the number of H_i containing it;
// dilation: max over parts of the max distance between two part nodes inside
// G[P_i] + H_i. finite=false when some part pair is unreachable.
ShortcutQuality measure_shortcut(const Graph& g, const Partition& parts,
                                 const Shortcut& sc);

// dilation: longest path; congestion: max edge multiplicity counted over all
// paths. Throws when a path does not connect its pair.
ShortcutQuality measure_pair_shortcut(const Graph& g, const PairSet& pairs,
                                      const PairShortcut& sc);

using PairOracle =
    std::function<PairShortcut(const Graph&, const PairSet&)>;

// BFS-shortest-path oracle (the baseline pairwise scheme).
PairShortcut bfs_pair_oracle(const Graph& g, const PairSet& pairs);

struct LiftResult {
  Shortcut shortcut;
  int levels = 0;       // recursion depth = oracle calls
  int light_paths = 0;  // total light paths across parts
};

// Part shortcut from a pairwise oracle: per part, a BFS spanning tree rooted
// at the lowest node id is decomposed heavy-light; every light path is
// recursively halved at its median and the oracle is invoked once per
// recursion level on all (s, m), (m, t) pairs of that level. H_i collects
// the returned paths of part i.
LiftResult lift_pairs_to_parts(const Graph& g, const Partition& parts,
                               const PairOracle& oracle);

struct QualityInterval {
  double lower = 0;
  int upper = 0;
  PairShortcut pair_witness;  // filled for the pair overload
  Shortcut part_witness;      // filled for the partition overload
};

// Sound bracket on the optimal quality: the upper bound is the measured
// quality of a constructed witness; the lower bound combines the forced
// distance bound with fractional min-congestion duals over dilation budgets.
QualityInterval quality_interval(const Graph& g, const PairSet& pairs);
QualityInterval quality_interval(const Graph& g, const Partition& parts);

// Round/validation counterpart lives with the simulator:
struct MstReductionReport {
  bool weights_equal = false;
  std::int64_t distributed_weight = 0;
  std::int64_t reference_weight = 0;
  int rounds = 0;
};

}  // namespace shortcutlab
