#include "shortcutlab/instances.hpp"

#include <algorithm>
#include <queue>

namespace shortcutlab {

Graph gen_cycle(int n) {
  if (n < 3) throw GraphError("cycle needs n >= 3");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(n, edges);
}

Graph gen_grid(int rows, int cols) {
  if (rows < 1 || cols < 1) throw GraphError("grid needs positive dimensions");
  auto id = [cols](int r, int c) { return r * cols + c; };
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
    }
  return Graph::from_edges(rows * cols, edges);
}

Graph gen_random_tree(int n, std::uint64_t seed) {
  if (n < 1) throw GraphError("tree needs n >= 1");
  std::mt19937_64 rng(derive_seed(seed, 0x7265657));
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    edges.emplace_back(pick(rng), v);
  }
  return Graph::from_edges(n, edges);
}

Graph gen_random_connected(int n, double p, std::uint64_t seed) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    std::mt19937_64 rng(derive_seed(seed, 0x676e70, attempt));
    std::bernoulli_distribution coin(p);
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (coin(rng)) edges.emplace_back(u, v);
    try {
      return Graph::from_edges(n, edges);
    } catch (const GraphError&) {
      continue;  // disconnected draw, retry with the next derived seed
    }
  }
  throw GraphError("gen_random_connected: no connected draw in 256 attempts");
}

GadgetFamilyInstance gen_gadget_family(int k, int path_len) {
  if (k < 1 || path_len < 1)
    throw GraphError("gadget family needs k >= 1 and path_len >= 1");
  const int L = path_len;
  std::vector<std::pair<int, int>> edges;
  GadgetFamilyInstance inst;
  for (int i = 0; i < k; ++i) {
    Walk p;
    for (int j = 0; j <= L; ++j) {
      p.nodes.push_back(i * (L + 1) + j);
      if (j > 0) edges.emplace_back(p.nodes[j - 1], p.nodes[j]);
    }
    inst.paths.paths.push_back(std::move(p));
  }
  // leaves: s_0..s_{k-1} then t_{k-1}..t_0, so s- and t-sides meet only at
  // the tree root
  std::vector<int> leaves;
  for (int i = 0; i < k; ++i) leaves.push_back(i * (L + 1));
  for (int i = k - 1; i >= 0; --i) leaves.push_back(i * (L + 1) + L);
  int next_id = k * (L + 1);
  std::vector<std::pair<int, int>> tree_edge_pairs;
  auto build = [&](auto&& self, int lo, int hi) -> int {
    if (hi - lo == 1) return leaves[lo];
    int node = next_id++;
    inst.tree_nodes.push_back(node);
    int mid = lo + (hi - lo + 1) / 2;
    int l = self(self, lo, mid);
    int r = self(self, mid, hi);
    tree_edge_pairs.emplace_back(node, l);
    tree_edge_pairs.emplace_back(node, r);
    return node;
  };
  if (leaves.size() == 2) {
    // k = 1: a single internal node joins both endpoints
    int node = next_id++;
    inst.tree_nodes.push_back(node);
    tree_edge_pairs.emplace_back(node, leaves[0]);
    tree_edge_pairs.emplace_back(node, leaves[1]);
    inst.tree_root = node;
  } else {
    inst.tree_root = build(build, 0, static_cast<int>(leaves.size()));
  }
  for (auto& e : tree_edge_pairs) edges.push_back(e);
  inst.graph = Graph::from_edges(next_id, edges);
  for (auto& [u, v] : tree_edge_pairs)
    inst.tree_edges.push_back(*inst.graph.edge_id(u, v));
  return inst;
}

SampledPairs sample_connectable_pairs(const Graph& g, int k,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, 0x70616972));
  std::vector<char> used(g.n(), 0);
  SampledPairs out;
  int attempts = 0;
  const int max_attempts = 60 * k + 100;
  std::uniform_int_distribution<int> pick(0, g.n() - 1);
  while (out.pairs.k() < k && attempts < max_attempts) {
    ++attempts;
    NodeId u = pick(rng), v = pick(rng);
    if (u == v || used[u] || used[v]) continue;
    // BFS through unused nodes only
    std::vector<int> prev(g.n(), -2);
    prev[u] = -1;
    std::queue<NodeId> q;
    q.push(u);
    while (!q.empty() && prev[v] == -2) {
      NodeId x = q.front();
      q.pop();
      for (NodeId w : g.neighbors(x)) {
        if (prev[w] != -2 || used[w]) continue;
        prev[w] = x;
        q.push(w);
      }
    }
    if (prev[v] == -2) continue;
    Walk path;
    for (NodeId x = v; x != -1; x = prev[x]) path.nodes.push_back(x);
    std::reverse(path.nodes.begin(), path.nodes.end());
    for (NodeId x : path.nodes) used[x] = 1;
    out.pairs.pairs.emplace_back(u, v);
    out.paths.paths.push_back(std::move(path));
  }
  return out;
}

}  // namespace shortcutlab
