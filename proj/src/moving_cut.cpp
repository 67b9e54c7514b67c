#include "shortcutlab/moving_cut.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "shortcutlab/instances.hpp"
#include "shortcutlab/lp.hpp"

namespace shortcutlab {

std::int64_t cut_capacity(const MovingCut& mc) {
  std::int64_t g = 0;
  for (int l : mc.ell) g += l - 1;
  return g;
}

std::int64_t cut_distance(const Graph& g, const MovingCut& mc,
                          const PairSet& pairs) {
  return ell_distance(g, mc.ell, pairs.sources(), pairs.sinks());
}

CutCheck validate_cut(const Graph& g, const MovingCut& mc,
                      const PairSet& pairs) {
  CutCheck out;
  if (static_cast<int>(mc.ell.size()) != g.m()) {
    out.reason = "length vector size mismatch";
    return out;
  }
  for (int l : mc.ell)
    if (l < 1) {
      out.reason = "edge length below one";
      return out;
    }
  if (pairs.k() < 1) {
    out.reason = "empty pair set";
    return out;
  }
  out.capacity = cut_capacity(mc);
  out.distance = cut_distance(g, mc, pairs);
  if (out.capacity >= pairs.k()) {
    out.reason = "capacity " + std::to_string(out.capacity) +
                 " not below pair count " + std::to_string(pairs.k());
    return out;
  }
  out.ok = true;
  return out;
}

MovingCut scale_cut(const MovingCut& mc, ScaleFactor c) {
  if (c.num < c.den || c.den < 1)
    throw GraphError("scale factor must be >= 1");
  MovingCut out;
  out.ell.reserve(mc.ell.size());
  for (int l : mc.ell) {
    std::int64_t extra = static_cast<std::int64_t>(l - 1) * c.den / c.num;
    out.ell.push_back(static_cast<int>(1 + extra));
  }
  return out;
}

ScaleFactor scale_schedule(int index) {
  if (index <= 0) return {1, 1};
  if (index == 1) return {3, 2};
  // 2, 3, 4, 6, 8, 12, 16, ...
  int i = index - 2;
  std::int64_t base = 1LL << (i / 2);
  return {i % 2 == 0 ? 2 * base : 3 * base, 1};
}

CutSearchResult search_cut_exact(const Graph& g, const PairSet& pairs,
                                 int l_max) {
  if (g.m() > 16)
    throw GraphError("exact cut search is limited to 16 edges");
  if (l_max < 1 || l_max > 6)
    throw GraphError("exact cut search needs 1 <= l_max <= 6");
  const int k = pairs.k();
  if (k < 1) throw GraphError("exact cut search needs at least one pair");
  CutSearchResult best;
  best.cut = MovingCut{std::vector<int>(g.m(), 1)};
  best.beta = cut_distance(g, best.cut, pairs);
  best.capacity = 0;

  std::vector<int> ell(g.m(), 1);
  auto consider = [&]() {
    MovingCut mc{ell};
    std::int64_t beta = cut_distance(g, mc, pairs);
    if (beta > best.beta) {
      best.cut = mc;
      best.beta = beta;
      best.capacity = cut_capacity(mc);
    }
  };
  // DFS over extra lengths with remaining budget k-1
  auto rec = [&](auto&& self, int e, std::int64_t budget) -> void {
    if (e == g.m()) {
      consider();
      return;
    }
    for (int extra = 0; extra <= std::min<std::int64_t>(l_max - 1, budget);
         ++extra) {
      ell[e] = 1 + extra;
      self(self, e + 1, budget - extra);
    }
    ell[e] = 1;
  };
  rec(rec, 0, k - 1);
  best.fractional_beta = static_cast<double>(best.beta);
  return best;
}

namespace {

struct FracPathResult {
  std::vector<std::vector<NodeId>> paths;  // most violated first
  double min_value = 0;
};

// ell-shortest source-set-to-sink-set paths under fractional lengths
// 1 + x_e; returns up to `batch` distinct sink-minimal paths in increasing
// length order.
FracPathResult frac_shortest_paths(const Graph& g,
                                   const std::vector<double>& extra,
                                   const std::vector<NodeId>& sources,
                                   const std::vector<NodeId>& sinks,
                                   int batch) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.n(), inf);
  std::vector<int> prev(g.n(), -1);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (NodeId s : sources) {
    dist[s] = 0;
    pq.push({0, s});
  }
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v] + 1e-12) continue;
    const auto& nb = g.neighbors(v);
    const auto& eid = g.incident_edges(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      double nd = d + 1.0 + extra[eid[i]];
      if (nd < dist[nb[i]] - 1e-12) {
        dist[nb[i]] = nd;
        prev[nb[i]] = v;
        pq.push({nd, nb[i]});
      }
    }
  }
  std::vector<std::pair<double, NodeId>> by_sink;
  for (NodeId t : sinks) by_sink.push_back({dist[t], t});
  std::sort(by_sink.begin(), by_sink.end());
  by_sink.erase(std::unique(by_sink.begin(), by_sink.end()), by_sink.end());
  FracPathResult out;
  out.min_value = by_sink.empty() ? inf : by_sink.front().first;
  for (auto& [d, t] : by_sink) {
    if (static_cast<int>(out.paths.size()) >= batch) break;
    std::vector<NodeId> path;
    for (NodeId v = t; v != -1; v = prev[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    out.paths.push_back(std::move(path));
  }
  return out;
}

}  // namespace

CutSearchResult search_cut_lp(const Graph& g, const PairSet& pairs,
                              const LpSearchOptions& opts) {
  const int k = pairs.k();
  if (k < 1) throw GraphError("lp cut search needs at least one pair");
  const std::int64_t budget = k - 1;

  struct Row {
    std::vector<EdgeId> edges;
    int hop;
    std::vector<NodeId> nodes;  // for dedup
  };
  std::vector<Row> rows;
  auto add_row = [&](const std::vector<NodeId>& nodes) -> bool {
    for (auto& r : rows)
      if (r.nodes == nodes) return false;
    Row r;
    r.nodes = nodes;
    r.hop = static_cast<int>(nodes.size()) - 1;
    Walk w{nodes};
    r.edges = w.edge_ids(g);
    rows.push_back(std::move(r));
    return true;
  };
  for (int i = 0; i < std::min(k, std::max(opts.batch, 8)); ++i) {
    auto [s, t] = pairs.pairs[i];
    add_row(bfs_path(g, s, t).nodes);
  }

  auto sources = pairs.sources();
  auto sinks = pairs.sinks();
  std::vector<double> extra(g.m(), 0.0);
  double t_master = 0;
  CutSearchResult out;
  out.converged = false;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    out.iterations = iter + 1;
    // columns: edges grouped by identical row membership
    std::map<std::vector<int>, std::vector<EdgeId>> groups;
    {
      std::map<EdgeId, std::vector<int>> pattern;
      for (int r = 0; r < static_cast<int>(rows.size()); ++r)
        for (EdgeId e : rows[r].edges) pattern[e].push_back(r);
      for (auto& [e, pat] : pattern) groups[pat].push_back(e);
    }
    const int q = static_cast<int>(groups.size());
    const int nrows = static_cast<int>(rows.size());
    // variables: [t, X_0..X_{q-1}]
    std::vector<std::vector<double>> a(nrows + 1,
                                       std::vector<double>(q + 1, 0.0));
    std::vector<double> b(nrows + 1, 0.0);
    std::vector<double> c(q + 1, 0.0);
    c[0] = 1.0;
    int gi = 0;
    std::vector<const std::vector<EdgeId>*> group_edges(q);
    for (auto& [pat, edges] : groups) {
      for (int r : pat) a[r][1 + gi] = -1.0;
      a[nrows][1 + gi] = 1.0;
      group_edges[gi] = &edges;
      ++gi;
    }
    for (int r = 0; r < nrows; ++r) {
      a[r][0] = 1.0;
      b[r] = rows[r].hop;
    }
    b[nrows] = static_cast<double>(budget);
    LpResult lp = simplex_max(a, b, c);
    if (!lp.bounded) throw GraphError("cut LP master unbounded");
    t_master = lp.objective;
    std::fill(extra.begin(), extra.end(), 0.0);
    for (int j = 0; j < q; ++j)
      if (lp.x[1 + j] > 1e-12) {
        // all mass on the lowest representative edge of the group
        EdgeId rep = *std::min_element(group_edges[j]->begin(),
                                       group_edges[j]->end());
        extra[rep] += lp.x[1 + j];
      }
    // separation
    auto sep = frac_shortest_paths(g, extra, sources, sinks, opts.batch);
    if (sep.min_value >= t_master - opts.tolerance) {
      out.converged = true;
      break;
    }
    bool added = false;
    for (auto& nodes : sep.paths) {
      double val = 0;
      Walk w{nodes};
      for (EdgeId e : w.edge_ids(g)) val += 1.0 + extra[e];
      if (val >= t_master - opts.tolerance) continue;
      added = add_row(nodes) || added;
    }
    if (!added) {
      out.converged = true;
      break;
    }
    // master row cap: drop the loosest rows
    if (static_cast<int>(rows.size()) > opts.max_rows) {
      std::vector<std::pair<double, int>> slack;
      for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
        double val = rows[r].hop - t_master;
        for (EdgeId e : rows[r].edges) val += extra[e];
        slack.push_back({val, r});
      }
      std::sort(slack.begin(), slack.end(), std::greater<>());
      std::vector<char> drop(rows.size(), 0);
      int excess = static_cast<int>(rows.size()) - opts.max_rows;
      for (auto& [s, r] : slack) {
        if (excess == 0 || s <= opts.tolerance) break;
        drop[r] = 1;
        --excess;
      }
      std::vector<Row> kept;
      for (std::size_t r = 0; r < rows.size(); ++r)
        if (!drop[r]) kept.push_back(std::move(rows[r]));
      rows = std::move(kept);
    }
  }

  out.fractional_beta = t_master;
  // integer cut: nearest rounding, then capacity repair
  MovingCut mc = MovingCut::unit(g);
  for (EdgeId e = 0; e < g.m(); ++e)
    mc.ell[e] = 1 + static_cast<int>(std::llround(extra[e]));
  int sched = 0;
  MovingCut repaired = mc;
  while (cut_capacity(repaired) >= k) {
    ++sched;
    out.repair = scale_schedule(sched);
    repaired = scale_cut(mc, out.repair);
  }
  out.cut = std::move(repaired);
  out.capacity = cut_capacity(out.cut);
  out.beta = cut_distance(g, out.cut, pairs);
  return out;
}

McEstimate mc_of_graph_estimate(const Graph& g, std::uint64_t seed,
                                int trials) {
  McEstimate best;
  // a maximally distant pair under unit lengths gives MC(G) >= D
  auto d0 = bfs_distances(g, 0);
  NodeId a = static_cast<NodeId>(
      std::max_element(d0.begin(), d0.end()) - d0.begin());
  auto da = bfs_distances(g, a);
  NodeId b = static_cast<NodeId>(
      std::max_element(da.begin(), da.end()) - da.begin());
  best.beta = da[b];
  best.pair_count = 1;
  for (int t = 0; t < trials; ++t) {
    int want = std::max(2, g.n() / 8);
    auto sampled =
        sample_connectable_pairs(g, want, derive_seed(seed, 0x6d63, t));
    if (sampled.pairs.k() < 1) continue;
    auto res = search_cut_lp(g, sampled.pairs);
    if (res.beta > best.beta) {
      best.beta = res.beta;
      best.pair_count = sampled.pairs.k();
    }
  }
  return best;
}

}  // namespace shortcutlab
