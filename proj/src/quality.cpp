#include <algorithm>
#include <cmath>

#include "shortcutlab/instances.hpp"
#include "shortcutlab/partition.hpp"
#include "shortcutlab/routing.hpp"

namespace shortcutlab {

namespace {

constexpr double kEps = 0.05;

std::vector<int> dilation_grid(int base, int cap) {
  std::vector<int> hs;
  for (int h = std::max(1, base); h <= cap; h *= 2) hs.push_back(h);
  if (hs.empty() || hs.back() != cap) hs.push_back(cap);
  return hs;
}

}  // namespace

QualityInterval quality_interval(const Graph& g, const PairSet& pairs) {
  if (pairs.k() < 1) throw GraphError("quality_interval needs pairs");
  QualityInterval out;
  // forced dilation: any shortcut path is a G-path
  int maxdist = 0;
  for (auto& [s, t] : pairs.pairs) {
    auto d = bfs_distances(g, s);
    maxdist = std::max(maxdist, d[t]);
  }
  // witness 1: direct shortest paths
  PairShortcut direct = bfs_pair_oracle(g, pairs);
  auto qd = measure_pair_shortcut(g, pairs, direct);
  out.upper = qd.quality();
  out.pair_witness = direct;

  Demand dem;
  for (auto& [s, t] : pairs.pairs) dem.entries.emplace_back(s, t, 1.0);
  double lower = maxdist + (maxdist > 0 ? 1 : 0);
  for (int h : dilation_grid(maxdist, std::max(maxdist, 2 * maxdist + 1))) {
    auto oh = opt_h(g, dem, h, kEps, 200);
    // any shortcut with dilation <= h has congestion >= the fractional
    // optimum; otherwise its dilation is at least h + 1
    lower = std::max(lower,
                     std::min<double>(h + 1, (1 - kEps) * oh.dual_lower));
    // witness 2: the mw witness rounded by per-pair max-probability paths
    PairShortcut rounded;
    for (auto& dist : oh.witness.dists) {
      const RoutedPath* best = &dist.front();
      for (auto& rp : dist)
        if (rp.prob > best->prob) best = &rp;
      rounded.paths.push_back(best->path);
    }
    auto qr = measure_pair_shortcut(g, pairs, rounded);
    if (qr.quality() < out.upper) {
      out.upper = qr.quality();
      out.pair_witness = rounded;
    }
  }
  out.lower = lower;
  return out;
}

QualityInterval quality_interval(const Graph& g, const Partition& parts) {
  parts.validate(g);
  QualityInterval out;
  // forced dilation per part: farthest intra-part pair under G distances
  int maxdist = 0;
  PairSet far;
  for (auto& part : parts.parts) {
    int best = 0;
    std::pair<NodeId, NodeId> who{part[0], part[0]};
    for (NodeId s : part) {
      auto d = bfs_distances(g, s);
      for (NodeId t : part)
        if (d[t] > best) {
          best = d[t];
          who = {s, t};
        }
    }
    maxdist = std::max(maxdist, best);
    if (who.first != who.second) far.pairs.push_back(who);
  }
  // witness: lift via the BFS pair oracle
  auto lift = lift_pairs_to_parts(g, parts, bfs_pair_oracle);
  auto ql = measure_shortcut(g, parts, lift.shortcut);
  if (!ql.finite) throw GraphError("lifted shortcut left a part disconnected");
  out.upper = ql.quality();
  out.part_witness = lift.shortcut;
  Shortcut empty;
  empty.per_part.resize(parts.k());
  auto qe = measure_shortcut(g, parts, empty);
  if (qe.finite && qe.quality() < out.upper) {
    out.upper = qe.quality();
    out.part_witness = empty;
  }

  double lower = maxdist;
  if (!far.pairs.empty()) {
    Demand dem;
    for (auto& [s, t] : far.pairs) dem.entries.emplace_back(s, t, 1.0);
    for (int h : dilation_grid(maxdist, std::max(2 * maxdist, 2))) {
      auto oh = opt_h(g, dem, h, kEps, 200);
      // part shortcuts route the farthest pair inside G[P_i] + H_i; an edge
      // serves its own part for free, hence the -1 slack on the dual
      lower = std::max(
          lower, std::min<double>(h + 1, (1 - kEps) * oh.dual_lower - 1));
    }
  }
  out.lower = std::min<double>(lower, out.upper);
  return out;
}

}  // namespace shortcutlab
