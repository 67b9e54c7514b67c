#include "shortcutlab/partition.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace shortcutlab {

void Partition::validate(const Graph& g) const {
  if (parts.empty()) throw GraphError("empty partition");
  std::vector<int> owner(g.n(), -1);
  for (int i = 0; i < k(); ++i) {
    if (parts[i].empty())
      throw GraphError("part " + std::to_string(i) + " is empty");
    for (NodeId v : parts[i]) {
      if (v < 0 || v >= g.n()) throw GraphError("part node out of range");
      if (owner[v] != -1) throw GraphError("parts overlap at node " +
                                           std::to_string(v));
      owner[v] = i;
    }
  }
}

std::vector<int> Partition::part_of(const Graph& g) const {
  std::vector<int> owner(g.n(), -1);
  for (int i = 0; i < k(); ++i)
    for (NodeId v : parts[i]) owner[v] = i;
  return owner;
}

namespace {

// Adjacency of G[P_i] + H_i over the touched node set; returns local ids.
struct AugmentedPart {
  std::vector<NodeId> nodes;               // local -> global
  std::unordered_map<NodeId, int> local;   // global -> local
  std::vector<std::vector<int>> adj;

  int ensure(NodeId v) {
    auto it = local.find(v);
    if (it != local.end()) return it->second;
    int id = static_cast<int>(nodes.size());
    local[v] = id;
    nodes.push_back(v);
    adj.emplace_back();
    return id;
  }
  void add_edge(NodeId u, NodeId v) {
    int a = ensure(u), b = ensure(v);
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
};

}  // namespace

ShortcutQuality measure_shortcut(const Graph& g, const Partition& parts,
                                 const Shortcut& sc) {
  parts.validate(g);
  if (static_cast<int>(sc.per_part.size()) > parts.k())
    throw GraphError("shortcut has more parts than the partition");
  ShortcutQuality out;
  std::vector<int> use(g.m(), 0);
  auto owner = parts.part_of(g);
  for (int i = 0; i < parts.k(); ++i) {
    AugmentedPart ap;
    for (NodeId v : parts.parts[i]) ap.ensure(v);
    for (NodeId v : parts.parts[i]) {
      const auto& nb = g.neighbors(v);
      for (NodeId w : nb)
        if (v < w && owner[w] == i) ap.add_edge(v, w);
    }
    if (i < static_cast<int>(sc.per_part.size())) {
      std::unordered_set<EdgeId> dedup;
      for (EdgeId e : sc.per_part[i]) {
        if (e < 0 || e >= g.m()) throw GraphError("shortcut edge id invalid");
        if (!dedup.insert(e).second) continue;
        ++use[e];
        auto [u, v] = g.edge(e);
        ap.add_edge(u, v);
      }
    }
    // dilation of part i: all-pairs BFS between part nodes
    int part_size = static_cast<int>(parts.parts[i].size());
    for (int s = 0; s < part_size; ++s) {
      std::vector<int> dist(ap.nodes.size(), -1);
      std::queue<int> q;
      dist[s] = 0;
      q.push(s);
      while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : ap.adj[v])
          if (dist[w] == -1) {
            dist[w] = dist[v] + 1;
            q.push(w);
          }
      }
      for (int t = 0; t < part_size; ++t) {
        if (dist[t] == -1) {
          out.finite = false;
        } else {
          out.dilation = std::max(out.dilation, dist[t]);
        }
      }
    }
  }
  out.congestion = use.empty() ? 0 : *std::max_element(use.begin(), use.end());
  return out;
}

ShortcutQuality measure_pair_shortcut(const Graph& g, const PairSet& pairs,
                                      const PairShortcut& sc) {
  if (static_cast<int>(sc.paths.size()) != pairs.k())
    throw GraphError("pair shortcut path count mismatch");
  ShortcutQuality out;
  std::vector<int> use(g.m(), 0);
  for (int i = 0; i < pairs.k(); ++i) {
    const Walk& p = sc.paths[i];
    if (!p.valid_in(g)) throw GraphError("pair path is not a walk in g");
    auto [s, t] = pairs.pairs[i];
    if (p.first() != s || p.last() != t)
      throw GraphError("pair path does not connect its pair");
    out.dilation = std::max(out.dilation, p.length());
    for (EdgeId e : p.edge_ids(g)) ++use[e];
  }
  out.congestion = use.empty() ? 0 : *std::max_element(use.begin(), use.end());
  return out;
}

PairShortcut bfs_pair_oracle(const Graph& g, const PairSet& pairs) {
  PairShortcut sc;
  for (auto& [s, t] : pairs.pairs) sc.paths.push_back(bfs_path(g, s, t));
  return sc;
}

LiftResult lift_pairs_to_parts(const Graph& g, const Partition& parts,
                               const PairOracle& oracle) {
  parts.validate(g);
  LiftResult out;
  out.shortcut.per_part.assign(parts.k(), {});
  auto owner = parts.part_of(g);

  struct Segment {
    int part;
    std::vector<NodeId> nodes;
  };
  std::vector<Segment> level;

  for (int i = 0; i < parts.k(); ++i) {
    // BFS spanning tree of G[P_i] rooted at the lowest node id
    const auto& nodes = parts.parts[i];
    NodeId root = *std::min_element(nodes.begin(), nodes.end());
    std::unordered_map<NodeId, int> local;
    for (std::size_t j = 0; j < nodes.size(); ++j)
      local[nodes[j]] = static_cast<int>(j);
    std::vector<std::vector<int>> tree(nodes.size());
    std::vector<int> prev(nodes.size(), -2);
    std::queue<NodeId> q;
    prev[local[root]] = -1;
    q.push(root);
    int reached = 0;
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop();
      ++reached;
      for (NodeId w : g.neighbors(v)) {
        if (owner[w] != i) continue;
        int lw = local[w];
        if (prev[lw] != -2) continue;
        prev[lw] = local[v];
        tree[local[v]].push_back(lw);
        tree[lw].push_back(local[v]);
        q.push(w);
      }
    }
    if (reached != static_cast<int>(nodes.size()))
      throw GraphError("part " + std::to_string(i) +
                       " is disconnected in its induced subgraph");
    auto hld = heavy_light(tree, local[root]);
    for (const Walk& lp : hld.light_paths) {
      if (lp.length() < 1) continue;
      Segment seg;
      seg.part = i;
      for (int lv : lp.nodes) seg.nodes.push_back(nodes[lv]);
      level.push_back(std::move(seg));
      ++out.light_paths;
    }
  }

  while (!level.empty()) {
    PairSet ps;
    std::vector<int> pair_part;
    std::vector<Segment> next;
    for (auto& seg : level) {
      std::size_t mid = seg.nodes.size() / 2;
      NodeId s = seg.nodes.front(), m = seg.nodes[mid], t = seg.nodes.back();
      if (s != m) {
        ps.pairs.emplace_back(s, m);
        pair_part.push_back(seg.part);
      }
      if (m != t) {
        ps.pairs.emplace_back(m, t);
        pair_part.push_back(seg.part);
      }
      if (mid >= 2) {
        Segment a{seg.part, {seg.nodes.begin(), seg.nodes.begin() + mid + 1}};
        next.push_back(std::move(a));
      }
      if (seg.nodes.size() - mid >= 3) {
        Segment b{seg.part, {seg.nodes.begin() + mid, seg.nodes.end()}};
        next.push_back(std::move(b));
      }
    }
    if (!ps.pairs.empty()) {
      PairShortcut resp = oracle(g, ps);
      if (static_cast<int>(resp.paths.size()) != ps.k())
        throw GraphError("pair oracle returned wrong path count");
      for (int j = 0; j < ps.k(); ++j) {
        auto [s, t] = ps.pairs[j];
        if (resp.paths[j].first() != s || resp.paths[j].last() != t)
          throw GraphError("pair oracle path endpoints mismatch");
        for (EdgeId e : resp.paths[j].edge_ids(g))
          out.shortcut.per_part[pair_part[j]].push_back(e);
      }
      ++out.levels;
    }
    level = std::move(next);
  }
  for (auto& h : out.shortcut.per_part) {
    std::sort(h.begin(), h.end());
    h.erase(std::unique(h.begin(), h.end()), h.end());
  }
  return out;
}

}  // namespace shortcutlab
