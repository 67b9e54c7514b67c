#include "shortcutlab/routing.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "shortcutlab/instances.hpp"

namespace shortcutlab {

int RoutingScheme::dilation() const {
  int d = 0;
  for (auto& dist : dists)
    for (auto& rp : dist) d = std::max(d, rp.path.length());
  return d;
}

void RoutingScheme::validate(const Graph& g) const {
  if (pairs.size() != dists.size())
    throw GraphError("routing scheme pair/distribution count mismatch");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    double total = 0;
    if (dists[i].empty()) throw GraphError("empty path distribution");
    for (auto& rp : dists[i]) {
      if (!rp.path.valid_in(g)) throw GraphError("scheme path invalid");
      if (rp.path.first() != pairs[i].first ||
          rp.path.last() != pairs[i].second)
        throw GraphError("scheme path endpoint mismatch");
      if (rp.prob <= 0) throw GraphError("nonpositive path probability");
      total += rp.prob;
    }
    if (std::fabs(total - 1.0) > 1e-6)
      throw GraphError("path probabilities do not sum to one");
  }
}

double scheme_congestion(const Graph& g, const RoutingScheme& r,
                         const Demand& d) {
  std::map<std::pair<NodeId, NodeId>, double> amount;
  for (auto& [s, t, a] : d.entries) amount[{s, t}] += a;
  std::vector<double> load(g.m(), 0.0);
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    auto it = amount.find(r.pairs[i]);
    if (it == amount.end()) continue;
    for (auto& rp : r.dists[i])
      for (EdgeId e : rp.path.edge_ids(g)) load[e] += it->second * rp.prob;
  }
  return load.empty() ? 0.0 : *std::max_element(load.begin(), load.end());
}

namespace {

// lightest path with at most h hops under edge weights; empty when none
Walk lightest_hop_path(const Graph& g, const std::vector<double>& w, NodeId s,
                       NodeId t, int h) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.n(), inf), next(g.n(), inf);
  std::vector<std::vector<int>> parent(h + 1, std::vector<int>(g.n(), -1));
  dist[s] = 0;
  std::vector<double> best(g.n(), inf);
  best[s] = 0;
  std::vector<int> best_hops(g.n(), 0);
  for (int step = 1; step <= h; ++step) {
    next = dist;
    parent[step] = parent[step - 1];
    for (EdgeId e = 0; e < g.m(); ++e) {
      auto [u, v] = g.edge(e);
      if (dist[u] + w[e] < next[v] - 1e-15) {
        next[v] = dist[u] + w[e];
        parent[step][v] = u;
      }
      if (dist[v] + w[e] < next[u] - 1e-15) {
        next[u] = dist[v] + w[e];
        parent[step][u] = v;
      }
    }
    dist.swap(next);
    for (int v = 0; v < g.n(); ++v)
      if (dist[v] < best[v] - 1e-15) {
        best[v] = dist[v];
        best_hops[v] = step;
      }
  }
  if (best[t] == inf) return {};
  Walk p;
  int v = t;
  int step = best_hops[t];
  p.nodes.push_back(v);
  while (v != s || step > 0) {
    int u = parent[step][v];
    if (u == -1) {
      if (v == s) break;
      return {};
    }
    p.nodes.push_back(u);
    v = u;
    --step;
    if (step < 0) return {};
  }
  std::reverse(p.nodes.begin(), p.nodes.end());
  if (p.first() != s) return {};
  return p;
}

}  // namespace

OptHResult opt_h(const Graph& g, const Demand& d, int h, double eps,
                 int max_iterations) {
  if (h < 1) throw GraphError("opt_h needs h >= 1");
  OptHResult out;
  for (auto& [s, t, a] : d.entries) {
    if (a <= 0) throw GraphError("demand amounts must be positive");
    out.witness.pairs.emplace_back(s, t);
    out.witness.dists.emplace_back();
  }
  if (d.entries.empty()) return out;

  std::vector<double> w(g.m(), 1.0);
  // per pair: path -> accumulated picks
  std::vector<std::map<std::vector<NodeId>, double>> picks(d.entries.size());
  double best_dual = 0;
  double last_value = std::numeric_limits<double>::infinity();
  int stable = 0;
  for (int iter = 0; iter < max_iterations; ++iter) {
    out.iterations = iter + 1;
    std::vector<double> load(g.m(), 0.0);
    double dual_num = 0, dual_den = 0;
    for (double we : w) dual_den += we;
    bool infeasible = false;
    for (std::size_t i = 0; i < d.entries.size(); ++i) {
      auto [s, t, a] = d.entries[i];
      Walk p = lightest_hop_path(g, w, s, t, h);
      if (p.empty()) {
        infeasible = true;
        break;
      }
      double plen = 0;
      for (EdgeId e : p.edge_ids(g)) {
        load[e] += a;
        plen += w[e];
      }
      dual_num += a * plen;
      picks[i][p.nodes] += 1.0;
    }
    if (infeasible)
      throw GraphError("opt_h: some pair unreachable within the hop budget");
    best_dual = std::max(best_dual, dual_num / dual_den);
    double maxload = *std::max_element(load.begin(), load.end());
    if (maxload > 0)
      for (EdgeId e = 0; e < g.m(); ++e)
        w[e] *= 1.0 + eps * load[e] / maxload;
    // early stop when the running average stops improving
    if ((iter + 1) % 20 == 0) {
      RoutingScheme avg;
      avg.pairs = out.witness.pairs;
      avg.dists.assign(picks.size(), {});
      for (std::size_t i = 0; i < picks.size(); ++i)
        for (auto& [nodes, cnt] : picks[i])
          avg.dists[i].push_back({cnt / (iter + 1), Walk{nodes}});
      double val = scheme_congestion(g, avg, d);
      if (val >= last_value * (1 - 1e-3)) {
        if (++stable >= 3) break;
      } else {
        stable = 0;
      }
      last_value = std::min(last_value, val);
    }
  }
  for (std::size_t i = 0; i < picks.size(); ++i) {
    double total = 0;
    for (auto& [nodes, cnt] : picks[i]) total += cnt;
    for (auto& [nodes, cnt] : picks[i])
      out.witness.dists[i].push_back({cnt / total, Walk{nodes}});
  }
  out.value = scheme_congestion(g, out.witness, d);
  out.dual_lower = best_dual;
  return out;
}

PairShortcut sample_shortcuts(const Graph& g, const RoutingScheme& r,
                              std::uint64_t seed) {
  r.validate(g);
  PairShortcut out;
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    double u = static_cast<double>(derive_seed(seed, 0x73616d70, i) >> 11) /
               static_cast<double>(1ULL << 53);
    double acc = 0;
    const RoutedPath* chosen = &r.dists[i].back();
    for (auto& rp : r.dists[i]) {
      acc += rp.prob;
      if (u < acc) {
        chosen = &rp;
        break;
      }
    }
    out.paths.push_back(chosen->path);
  }
  return out;
}

RoutingScheme baseline_scheme(const Graph& g, const PairSet& pairs,
                              BaselineKind kind, int h) {
  RoutingScheme r;
  if (kind == BaselineKind::Shortest) {
    for (auto& [s, t] : pairs.pairs) {
      r.pairs.emplace_back(s, t);
      r.dists.push_back({{1.0, bfs_path(g, s, t)}});
    }
    return r;
  }
  Demand d;
  for (auto& [s, t] : pairs.pairs) d.entries.emplace_back(s, t, 1.0);
  return opt_h(g, d, h).witness;
}

}  // namespace shortcutlab
