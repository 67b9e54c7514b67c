#include "shortcutlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace shortcutlab {

namespace {

std::int64_t edge_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return static_cast<std::int64_t>(u) << 32 | static_cast<std::uint32_t>(v);
}

}  // namespace

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
  if (n <= 0) throw GraphError("graph must have at least one node");
  Graph g;
  g.n_ = n;
  g.adj_.assign(n, {});
  g.adj_eid_.assign(n, {});
  for (auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw GraphError("edge endpoint out of range: (" + std::to_string(u) +
                       ", " + std::to_string(v) + ")");
    if (u == v) throw GraphError("self-loop at node " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i] == edges[i - 1])
      throw GraphError("duplicate edge (" + std::to_string(edges[i].first) +
                       ", " + std::to_string(edges[i].second) + ")");
  g.edges_ = std::move(edges);
  for (EdgeId e = 0; e < g.m(); ++e) {
    auto [u, v] = g.edges_[e];
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
    g.adj_eid_[u].push_back(e);
    g.adj_eid_[v].push_back(e);
    g.edge_index_[edge_key(u, v)] = e;
  }
  // adjacency arrives sorted because edges_ is sorted lexicographically,
  // except for the v-side lists; sort both with parallel eid lists.
  for (int v = 0; v < n; ++v) {
    std::vector<std::pair<int, EdgeId>> zipped(g.adj_[v].size());
    for (std::size_t i = 0; i < zipped.size(); ++i)
      zipped[i] = {g.adj_[v][i], g.adj_eid_[v][i]};
    std::sort(zipped.begin(), zipped.end());
    for (std::size_t i = 0; i < zipped.size(); ++i) {
      g.adj_[v][i] = zipped[i].first;
      g.adj_eid_[v][i] = zipped[i].second;
    }
  }
  // connectivity with component-size diagnostic
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  std::vector<int> sizes;
  for (int s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    int size = 0;
    std::vector<int> stack{s};
    comp[s] = ncomp;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      ++size;
      for (int w : g.adj_[v])
        if (comp[w] == -1) {
          comp[w] = ncomp;
          stack.push_back(w);
        }
    }
    sizes.push_back(size);
    ++ncomp;
  }
  if (ncomp > 1) {
    std::ostringstream os;
    os << "graph is disconnected: " << ncomp << " components with sizes";
    for (int s : sizes) os << ' ' << s;
    throw GraphError(os.str());
  }
  return g;
}

std::optional<EdgeId> Graph::edge_id(NodeId u, NodeId v) const {
  auto it = edge_index_.find(edge_key(u, v));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

bool Walk::valid_in(const Graph& g) const {
  if (nodes.empty()) return false;
  for (NodeId v : nodes)
    if (v < 0 || v >= g.n()) return false;
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!g.has_edge(nodes[i - 1], nodes[i])) return false;
  return true;
}

bool Walk::simple() const {
  std::vector<NodeId> s = nodes;
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

Walk Walk::reversed() const {
  Walk w = *this;
  std::reverse(w.nodes.begin(), w.nodes.end());
  return w;
}

Walk Walk::simplified() const {
  // loop erasure: jump to the last occurrence of each visited node
  std::unordered_map<NodeId, std::size_t> last;
  for (std::size_t i = 0; i < nodes.size(); ++i) last[nodes[i]] = i;
  Walk out;
  std::size_t i = 0;
  while (i < nodes.size()) {
    out.nodes.push_back(nodes[i]);
    i = last[nodes[i]] + 1;
  }
  return out;
}

std::vector<EdgeId> Walk::edge_ids(const Graph& g) const {
  std::vector<EdgeId> ids;
  ids.reserve(nodes.size());
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    auto e = g.edge_id(nodes[i - 1], nodes[i]);
    if (!e) throw GraphError("walk step is not a graph edge");
    ids.push_back(*e);
  }
  return ids;
}

std::vector<int> PartPaths::part_of(const Graph& g) const {
  std::vector<int> owner(g.n(), -1);
  for (int i = 0; i < k(); ++i)
    for (NodeId v : paths[i].nodes) {
      if (v < 0 || v >= g.n()) throw GraphError("part-path node out of range");
      if (owner[v] != -1)
        throw GraphError("part-paths are not vertex-disjoint at node " +
                         std::to_string(v));
      owner[v] = i;
    }
  return owner;
}

void PartPaths::validate(const Graph& g) const {
  if (paths.empty()) throw GraphError("empty part-path collection");
  for (int i = 0; i < k(); ++i) {
    if (!paths[i].valid_in(g))
      throw GraphError("part-path " + std::to_string(i) + " is not a walk in g");
    if (!paths[i].simple())
      throw GraphError("part-path " + std::to_string(i) + " is not simple");
  }
  part_of(g);  // throws on overlap
}

std::vector<NodeId> PairSet::sources() const {
  std::vector<NodeId> out;
  out.reserve(pairs.size());
  for (auto& [s, t] : pairs) out.push_back(s);
  return out;
}

std::vector<NodeId> PairSet::sinks() const {
  std::vector<NodeId> out;
  out.reserve(pairs.size());
  for (auto& [s, t] : pairs) out.push_back(t);
  return out;
}

PairSet PairSet::from_part_paths(const PartPaths& pp) {
  PairSet ps;
  for (auto& p : pp.paths) ps.pairs.emplace_back(p.first(), p.last());
  return ps;
}

std::vector<int> bfs_distances(const Graph& g, NodeId source) {
  return bfs_distances(g, std::vector<NodeId>{source});
}

std::vector<int> bfs_distances(const Graph& g,
                               const std::vector<NodeId>& sources) {
  std::vector<int> dist(g.n(), -1);
  std::queue<NodeId> q;
  for (NodeId s : sources)
    if (dist[s] == -1) {
      dist[s] = 0;
      q.push(s);
    }
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop();
    for (NodeId w : g.neighbors(v))
      if (dist[w] == -1) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
  }
  return dist;
}

Walk bfs_path(const Graph& g, NodeId u, NodeId v) {
  std::vector<int> prev(g.n(), -2);
  prev[u] = -1;
  std::queue<NodeId> q;
  q.push(u);
  while (!q.empty() && prev[v] == -2) {
    NodeId x = q.front();
    q.pop();
    for (NodeId w : g.neighbors(x))
      if (prev[w] == -2) {
        prev[w] = x;
        q.push(w);
      }
  }
  Walk w;
  for (NodeId x = v; x != -1; x = prev[x]) w.nodes.push_back(x);
  std::reverse(w.nodes.begin(), w.nodes.end());
  return w;
}

int eccentricity(const Graph& g, NodeId v) {
  auto d = bfs_distances(g, v);
  return *std::max_element(d.begin(), d.end());
}

int diameter(const Graph& g) {
  if (g.n() <= 512) {
    int best = 0;
    for (int v = 0; v < g.n(); ++v) best = std::max(best, eccentricity(g, v));
    return best;
  }
  // iFUB: double sweep for a hub, then refute by decreasing BFS level.
  auto d0 = bfs_distances(g, 0);
  NodeId a = static_cast<NodeId>(
      std::max_element(d0.begin(), d0.end()) - d0.begin());
  auto da = bfs_distances(g, a);
  NodeId b = static_cast<NodeId>(
      std::max_element(da.begin(), da.end()) - da.begin());
  auto db = bfs_distances(g, b);
  // hub: midpoint of the a-b shortest path
  Walk ab = bfs_path(g, a, b);
  NodeId hub = ab.nodes[ab.nodes.size() / 2];
  auto dh = bfs_distances(g, hub);
  int lb = std::max(da[b], 0);
  std::vector<std::pair<int, NodeId>> order(g.n());
  for (int v = 0; v < g.n(); ++v) order[v] = {dh[v], v};
  std::sort(order.begin(), order.end(), std::greater<>());
  for (auto& [lev, v] : order) {
    if (2 * lev <= lb) break;
    lb = std::max(lb, eccentricity(g, v));
  }
  return lb;
}

std::vector<std::int64_t> ell_distances(const Graph& g,
                                        const std::vector<int>& lengths,
                                        const std::vector<NodeId>& sources) {
  if (static_cast<int>(lengths.size()) != g.m())
    throw GraphError("length vector size mismatch");
  for (int l : lengths)
    if (l < 1) throw GraphError("edge lengths must be >= 1");
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> dist(g.n(), inf);
  using Item = std::pair<std::int64_t, NodeId>;  // lowest id wins on ties
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (NodeId s : sources) {
    if (dist[s] > 0) {
      dist[s] = 0;
      pq.push({0, s});
    }
  }
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d != dist[v]) continue;
    const auto& nb = g.neighbors(v);
    const auto& eid = g.incident_edges(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      std::int64_t nd = d + lengths[eid[i]];
      if (nd < dist[nb[i]]) {
        dist[nb[i]] = nd;
        pq.push({nd, nb[i]});
      }
    }
  }
  return dist;
}

std::int64_t ell_distance(const Graph& g, const std::vector<int>& lengths,
                          const std::vector<NodeId>& xs,
                          const std::vector<NodeId>& ys) {
  auto dist = ell_distances(g, lengths, xs);
  std::int64_t best = std::numeric_limits<std::int64_t>::max() / 4;
  for (NodeId y : ys) best = std::min(best, dist[y]);
  return best;
}

Walk clip_walk(const Walk& w, const std::vector<char>& in_a,
               const std::vector<char>& in_b) {
  int last_a = -1;
  for (int i = 0; i < static_cast<int>(w.nodes.size()); ++i)
    if (in_a[w.nodes[i]]) last_a = i;
  if (last_a == -1) throw GraphError("clip undefined: walk never visits A");
  int first_b = -1;
  for (int i = last_a; i < static_cast<int>(w.nodes.size()); ++i)
    if (in_b[w.nodes[i]]) {
      first_b = i;
      break;
    }
  if (first_b == -1)
    throw GraphError("clip undefined: no B-visit after the last A-visit");
  Walk out;
  out.nodes.assign(w.nodes.begin() + last_a, w.nodes.begin() + first_b + 1);
  return out;
}

Walk clip_walk(const Walk& w, const std::vector<NodeId>& a,
               const std::vector<NodeId>& b, int n) {
  std::vector<char> in_a(n, 0), in_b(n, 0);
  for (NodeId v : a) in_a[v] = 1;
  for (NodeId v : b) in_b[v] = 1;
  return clip_walk(w, in_a, in_b);
}

std::vector<int> project_walk(const Walk& w, const std::vector<int>& part_of) {
  std::vector<int> out;
  for (NodeId v : w.nodes) {
    int p = part_of[v];
    if (p < 0) continue;
    if (out.empty() || out.back() != p) out.push_back(p);
  }
  return out;
}

HeavyLightDecomposition heavy_light(const std::vector<std::vector<int>>& tree,
                                    NodeId root) {
  int n = static_cast<int>(tree.size());
  if (root < 0 || root >= n) throw GraphError("root out of range");
  HeavyLightDecomposition h;
  h.root = root;
  h.parent.assign(n, -1);
  h.subtree_size.assign(n, 1);
  h.light_to_parent.assign(n, 0);

  std::vector<int> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  std::vector<int> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int w : tree[v]) {
      if (seen[w]) continue;
      seen[w] = 1;
      h.parent[w] = v;
      stack.push_back(w);
    }
  }
  if (static_cast<int>(order.size()) != n)
    throw GraphError("heavy_light input is not a connected tree");
  std::size_t edge_count = 0;
  for (auto& nb : tree) edge_count += nb.size();
  if (edge_count != 2u * (n - 1))
    throw GraphError("heavy_light input is not a tree");

  for (int i = n - 1; i >= 0; --i) {
    int v = order[i];
    if (h.parent[v] != -1) h.subtree_size[h.parent[v]] += h.subtree_size[v];
  }
  // one light child per non-leaf: largest subtree, ties to lowest id
  std::vector<int> light_child(n, -1);
  for (int v : order) {
    int best = -1;
    for (int w : tree[v]) {
      if (w == h.parent[v]) continue;
      if (best == -1 || h.subtree_size[w] > h.subtree_size[best]) best = w;
    }
    // sorted-adjacency guarantee: ties resolve to the lowest child id only
    // if adjacency is sorted; enforce regardless.
    for (int w : tree[v]) {
      if (w == h.parent[v] || w == best) continue;
      if (h.subtree_size[w] == h.subtree_size[best] && w < best) best = w;
    }
    light_child[v] = best;
    if (best != -1) h.light_to_parent[best] = 1;
  }
  // maximal light paths, top-down
  for (int v : order) {
    bool head = (h.parent[v] == -1) || !h.light_to_parent[v];
    if (!head) continue;
    Walk p;
    int x = v;
    p.nodes.push_back(x);
    while (light_child[x] != -1) {
      x = light_child[x];
      p.nodes.push_back(x);
    }
    h.light_paths.push_back(std::move(p));
  }
  return h;
}

namespace {

int induced_diameter(const Graph& g, const std::vector<NodeId>& comp) {
  std::vector<char> in(g.n(), 0);
  for (NodeId v : comp) in[v] = 1;
  int best = 0;
  for (NodeId s : comp) {
    std::vector<int> dist(g.n(), -1);
    std::queue<NodeId> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop();
      best = std::max(best, dist[v]);
      for (NodeId w : g.neighbors(v))
        if (in[w] && dist[w] == -1) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
    }
  }
  return best;
}

}  // namespace

BiconnectedResult biconnected(const Graph& g) {
  // iterative Tarjan; components are maximal sets of edges where every two
  // edges lie on a common simple cycle (bridges form singleton components)
  int n = g.n();
  std::vector<int> disc(n, -1), low(n, 0), parent_edge(n, -1);
  std::vector<std::pair<int, int>> estack;  // edges as (u, v)
  BiconnectedResult out;

  struct Frame {
    int v;
    std::size_t i;
  };
  int timer = 0;
  std::vector<Frame> st;
  st.push_back({0, 0});
  disc[0] = low[0] = timer++;
  while (!st.empty()) {
    auto& f = st.back();
    int v = f.v;
    if (f.i < g.neighbors(v).size()) {
      int w = g.neighbors(v)[f.i];
      EdgeId e = g.incident_edges(v)[f.i];
      ++f.i;
      if (e == parent_edge[v]) continue;
      if (disc[w] == -1) {
        estack.push_back({v, w});
        parent_edge[w] = e;
        disc[w] = low[w] = timer++;
        st.push_back({w, 0});
      } else if (disc[w] < disc[v]) {
        estack.push_back({v, w});
        low[v] = std::min(low[v], disc[w]);
      }
    } else {
      st.pop_back();
      if (st.empty()) break;
      int p = st.back().v;
      low[p] = std::min(low[p], low[v]);
      if (low[v] >= disc[p]) {
        // pop the component rooted at edge (p, v)
        std::vector<NodeId> comp;
        std::vector<char> seen(0);
        std::unordered_map<int, char> mark;
        while (!estack.empty()) {
          auto [a, b] = estack.back();
          estack.pop_back();
          if (!mark.count(a)) {
            mark[a] = 1;
            comp.push_back(a);
          }
          if (!mark.count(b)) {
            mark[b] = 1;
            comp.push_back(b);
          }
          if (a == p && b == v) break;
        }
        std::sort(comp.begin(), comp.end());
        out.components.push_back(std::move(comp));
      }
    }
  }
  for (auto& comp : out.components)
    out.d_bcc = std::max(out.d_bcc, induced_diameter(g, comp));
  return out;
}

}  // namespace shortcutlab
