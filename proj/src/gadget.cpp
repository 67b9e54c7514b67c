#include "shortcutlab/gadget.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace shortcutlab {

namespace {

std::vector<char> node_mask(const Graph& g, const std::vector<EdgeId>& edges) {
  std::vector<char> in(g.n(), 0);
  for (EdgeId e : edges) {
    auto [u, v] = g.edge(e);
    in[u] = 1;
    in[v] = 1;
  }
  return in;
}

void add_walk_edges(const Graph& g, const Walk& w, std::set<EdgeId>& into) {
  for (EdgeId e : w.edge_ids(g)) into.insert(e);
}

bool edges_connected(const Graph& g, const std::vector<EdgeId>& edges) {
  if (edges.empty()) return false;
  auto in = node_mask(g, edges);
  std::vector<char> ine(g.m(), 0);
  for (EdgeId e : edges) ine[e] = 1;
  NodeId start = -1;
  int total = 0;
  for (int v = 0; v < g.n(); ++v)
    if (in[v]) {
      if (start < 0) start = v;
      ++total;
    }
  std::vector<char> seen(g.n(), 0);
  std::queue<NodeId> q;
  q.push(start);
  seen[start] = 1;
  int reached = 1;
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop();
    const auto& nb = g.neighbors(v);
    const auto& ei = g.incident_edges(v);
    for (size_t i = 0; i < nb.size(); ++i) {
      if (!ine[ei[i]] || seen[nb[i]]) continue;
      seen[nb[i]] = 1;
      ++reached;
      q.push(nb[i]);
    }
  }
  return reached == total;
}

int ceil_log2(int x) {
  int r = 0;
  while ((1 << r) < x) ++r;
  return std::max(r, 1);
}

// Greedy minimum cover of sorted positions by intervals of span <= len.
// Optimal for this 1-d problem.
int interval_cover_count(const std::vector<int>& pos, int len) {
  int count = 0;
  size_t i = 0;
  while (i < pos.size()) {
    ++count;
    int end = pos[i] + len;
    while (i < pos.size() && pos[i] <= end) ++i;
  }
  return count;
}

// Interval endpoints [start, end] of the greedy cover.
std::vector<std::pair<int, int>> interval_cover(const std::vector<int>& pos,
                                                int len) {
  std::vector<std::pair<int, int>> out;
  size_t i = 0;
  while (i < pos.size()) {
    int start = pos[i];
    int last = pos[i];
    while (i < pos.size() && pos[i] <= start + len) last = pos[i++];
    out.emplace_back(start, last);
  }
  return out;
}

}  // namespace

const Walk& ContractionGraph::witness_for(int i, int j) const {
  int a = std::min(i, j), b = std::max(i, j);
  for (size_t e = 0; e < edges.size(); ++e)
    if (edges[e].first == a && edges[e].second == b) return witness[e];
  throw GadgetError("no contraction edge {" + std::to_string(i) + "," +
                    std::to_string(j) + "}");
}

ContractionGraph build_contraction_graph(const Graph& g, const PartPaths& pp) {
  pp.validate(g);
  auto part = pp.part_of(g);
  int k = pp.k(), n = g.n();
  ContractionGraph r;
  r.k = k;
  r.adj.assign(k, {});
  std::vector<int> stamp(n, -1), parent(n, -1);
  std::map<std::pair<int, int>, Walk> found;
  std::vector<NodeId> order;
  for (int i = 0; i < k; ++i) {
    order.clear();
    for (NodeId v : pp.paths[i].nodes) {
      stamp[v] = i;
      parent[v] = -1;
      order.push_back(v);
    }
    for (size_t h = 0; h < order.size(); ++h) {
      NodeId v = order[h];
      if (part[v] >= 0 && part[v] != i) continue;  // hit nodes do not expand
      for (NodeId w : g.neighbors(v)) {
        if (stamp[w] == i) continue;
        stamp[w] = i;
        parent[w] = v;
        int pw = part[w];
        if (pw >= 0 && pw != i) {
          std::pair<int, int> key{std::min(i, pw), std::max(i, pw)};
          if (!found.count(key)) {
            Walk wit;
            for (NodeId x = w; x >= 0; x = parent[x]) wit.nodes.push_back(x);
            std::reverse(wit.nodes.begin(), wit.nodes.end());
            if (i > pw) wit = wit.reversed();
            found.emplace(key, std::move(wit));
          }
        } else if (pw < 0) {
          order.push_back(w);  // expand through free nodes only
        }
      }
    }
  }
  for (auto& [key, wit] : found) {
    r.edges.push_back(key);
    r.witness.push_back(std::move(wit));
    r.adj[key.first].push_back(key.second);
    r.adj[key.second].push_back(key.first);
  }
  for (auto& a : r.adj) std::sort(a.begin(), a.end());
  // connectivity of R (holds on any connected host graph)
  if (k > 1) {
    std::vector<char> seen(k, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reach = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : r.adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++reach;
          q.push(w);
        }
    }
    if (reach != k) throw GadgetError("contraction graph is disconnected");
  }
  return r;
}

PartPaths minimalize_paths(const Graph& g, const PartPaths& initial) {
  initial.validate(g);
  PartPaths pp = initial;
  int n = g.n();
  auto part = pp.part_of(g);
  std::vector<int> dist(n), stamp(n, -1), parent(n);
  std::vector<NodeId> order;
  int version = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < pp.k(); ++i) {
      auto [s, t] = pp.endpoints(i);
      ++version;
      order.clear();
      order.push_back(s);
      stamp[s] = version;
      dist[s] = 0;
      parent[s] = -1;
      int dt = -1;
      for (size_t h = 0; h < order.size() && dt < 0; ++h) {
        NodeId v = order[h];
        for (NodeId w : g.neighbors(v)) {
          if (stamp[w] == version) continue;
          if (part[w] >= 0 && part[w] != i) continue;
          stamp[w] = version;
          dist[w] = dist[v] + 1;
          parent[w] = v;
          if (w == t) {
            dt = dist[w];
            break;
          }
          order.push_back(w);
        }
      }
      if (dt >= 0 && dt < pp.paths[i].length()) {
        for (NodeId v : pp.paths[i].nodes) part[v] = -1;
        Walk nw;
        for (NodeId x = t; x >= 0; x = parent[x]) nw.nodes.push_back(x);
        std::reverse(nw.nodes.begin(), nw.nodes.end());
        pp.paths[i] = std::move(nw);
        for (NodeId v : pp.paths[i].nodes) part[v] = i;
        changed = true;
      }
    }
  }
  return pp;
}

bool check_paths_minimal(const Graph& g, const PartPaths& pp) {
  int n = g.n();
  auto part = pp.part_of(g);
  std::vector<int> dist(n), stamp(n, -1);
  std::vector<NodeId> order;
  for (int i = 0; i < pp.k(); ++i) {
    NodeId s = pp.paths[i].first();
    order.clear();
    order.push_back(s);
    stamp[s] = i;
    dist[s] = 0;
    for (size_t h = 0; h < order.size(); ++h) {
      NodeId v = order[h];
      for (NodeId w : g.neighbors(v)) {
        if (stamp[w] == i) continue;
        if (part[w] >= 0 && part[w] != i) continue;
        stamp[w] = i;
        dist[w] = dist[v] + 1;
        order.push_back(w);
      }
    }
    const auto& nodes = pp.paths[i].nodes;
    for (int j = 0; j < static_cast<int>(nodes.size()); ++j)
      if (stamp[nodes[j]] != i || dist[nodes[j]] != j) return false;
  }
  return true;
}

GadgetCheck validate_crown(const Graph& g, const PartPaths& pp,
                           const Crown& crown, const std::vector<int>& universe,
                           int d) {
  GadgetCheck out;
  int k = pp.k();
  for (EdgeId e : crown.tree_edges)
    if (e < 0 || e >= g.m()) {
      out.reason = "tree edge id out of range";
      return out;
    }
  if (crown.tree_edges.empty()) {
    out.reason = "empty crown edge set";
    return out;
  }
  std::vector<char> inA(k, 0), inU(k, 0);
  for (int a : crown.parts) {
    if (a < 0 || a >= k) {
      out.reason = "part index out of range";
      return out;
    }
    inA[a] = 1;
  }
  for (int u : crown.useful) {
    if (u < 0 || u >= k || !inA[u]) {
      out.reason = "useful part not in A";
      return out;
    }
    inU[u] = 1;
  }
  if (4 * static_cast<int>(crown.useful.size()) <
      static_cast<int>(crown.parts.size()) + 8) {
    out.reason = "|U| < |A|/4 + 2";
    return out;
  }
  if (!edges_connected(g, crown.tree_edges)) {
    out.reason = "T is not connected";
    return out;
  }
  auto inT = node_mask(g, crown.tree_edges);
  for (int i : universe) {
    if (inA[i]) continue;
    for (NodeId v : pp.paths[i].nodes)
      if (inT[v]) {
        out.reason = "T touches p_" + std::to_string(i) + " outside A";
        return out;
      }
  }
  for (int u : crown.useful) {
    int lo = -1, hi = -1;
    const auto& nodes = pp.paths[u].nodes;
    for (int j = 0; j < static_cast<int>(nodes.size()); ++j)
      if (inT[nodes[j]]) {
        if (lo < 0) lo = j;
        hi = j;
      }
    if (lo < 0) {
      out.reason = "T misses useful part " + std::to_string(u);
      return out;
    }
    if (hi - lo > d) {
      out.reason = "coverage span " + std::to_string(hi - lo) + " > d on part " +
                   std::to_string(u);
      return out;
    }
  }
  out.ok = true;
  return out;
}

std::vector<Crown> crowns_high_degree(const Graph& g, const ContractionGraph& r,
                                      const PartPaths& pp) {
  int k = r.k;
  std::vector<char> avail(k, 1);
  struct Build {
    std::set<EdgeId> t;
    std::set<int> a, u;
  };
  std::vector<Build> builds;
  std::vector<int> crown_of(k, -1);  // crown index a part is useful in
  auto avail_neighbors = [&](int v) {
    std::vector<int> out;
    for (int w : r.adj[v])
      if (avail[w]) out.push_back(w);
    return out;
  };
  auto absorb = [&](Build& b, int bi, int center,
                    const std::vector<int>& xs) {
    add_walk_edges(g, pp.paths[center], b.t);
    for (int x : xs) {
      add_walk_edges(g, r.witness_for(center, x), b.t);
      avail[x] = 0;
      b.a.insert(x);
      b.u.insert(x);
      crown_of[x] = bi;
    }
  };
  while (true) {
    int grow = -1;
    for (int v = 0; v < k && grow < 0; ++v)
      if (crown_of[v] >= 0 && builds[crown_of[v]].u.count(v) &&
          avail_neighbors(v).size() >= 2)
        grow = v;
    if (grow >= 0) {
      int bi = crown_of[grow];
      Build& b = builds[bi];
      auto xs = avail_neighbors(grow);
      b.u.erase(grow);
      absorb(b, bi, grow, xs);
      continue;
    }
    int seed = -1;
    for (int v = 0; v < k && seed < 0; ++v)
      if (avail[v] && avail_neighbors(v).size() >= 3) seed = v;
    if (seed < 0) break;
    builds.emplace_back();
    int bi = static_cast<int>(builds.size()) - 1;
    Build& b = builds[bi];
    avail[seed] = 0;
    b.a.insert(seed);
    crown_of[seed] = bi;
    absorb(b, bi, seed, avail_neighbors(seed));
  }
  std::vector<Crown> out;
  for (auto& b : builds) {
    Crown c;
    c.tree_edges.assign(b.t.begin(), b.t.end());
    c.parts.assign(b.a.begin(), b.a.end());
    c.useful.assign(b.u.begin(), b.u.end());
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

// Crowns from consecutive part triples along a window walk: the walk, clipped
// between the last visit of the first part and the first visit of the third,
// has its middle-part subwalk replaced by the part-path's own connecting
// subpath (shortest by path minimality, so of length <= d).
void emit_triple_crowns(const Graph& g, const PartPaths& pp,
                        const std::vector<int>& part, const Walk& wp,
                        const std::vector<int>& window, int d,
                        std::vector<Crown>& out) {
  int count = static_cast<int>(window.size());
  std::vector<int> universe(pp.k());
  std::iota(universe.begin(), universe.end(), 0);
  for (int t = 0; 3 * (t + 1) <= count; ++t) {
    int pa = window[3 * t], pb = window[3 * t + 1], pc = window[3 * t + 2];
    Walk wi;
    try {
      wi = clip_walk(wp, pp.paths[pa].nodes, pp.paths[pc].nodes, g.n());
    } catch (const GraphError&) {
      continue;
    }
    int first_b = -1, last_b = -1;
    for (int j = 0; j < static_cast<int>(wi.nodes.size()); ++j)
      if (part[wi.nodes[j]] == pb) {
        if (first_b < 0) first_b = j;
        last_b = j;
      }
    if (first_b < 0) continue;
    NodeId u = wi.nodes[first_b], v = wi.nodes[last_b];
    const auto& bn = pp.paths[pb].nodes;
    int ui = -1, vi = -1;
    for (int j = 0; j < static_cast<int>(bn.size()); ++j) {
      if (bn[j] == u) ui = j;
      if (bn[j] == v) vi = j;
    }
    Walk rep;
    rep.nodes.assign(wi.nodes.begin(), wi.nodes.begin() + first_b + 1);
    if (ui <= vi)
      rep.nodes.insert(rep.nodes.end(), bn.begin() + ui + 1,
                       bn.begin() + vi + 1);
    else
      for (int j = ui - 1; j >= vi; --j) rep.nodes.push_back(bn[j]);
    rep.nodes.insert(rep.nodes.end(), wi.nodes.begin() + last_b + 1,
                     wi.nodes.end());
    Crown c;
    std::set<EdgeId> t_edges;
    add_walk_edges(g, rep, t_edges);
    c.tree_edges.assign(t_edges.begin(), t_edges.end());
    c.parts = {pa, pb, pc};
    std::sort(c.parts.begin(), c.parts.end());
    c.useful = c.parts;
    if (validate_crown(g, pp, c, universe, d).ok) out.push_back(std::move(c));
  }
}

}  // namespace

std::vector<Crown> crowns_low_degree(const Graph& g, const ContractionGraph& r,
                                     const PartPaths& pp, int d) {
  int k = r.k;
  std::vector<Crown> out;
  if (k <= 2) return out;
  std::vector<char> removed(k, 0);
  bool any_high = false;
  for (int v = 0; v < k; ++v)
    if (r.degree(v) >= 3) {
      removed[v] = 1;
      any_high = true;
    }
  if (!any_high) {
    bool cycle = true;
    for (int v = 0; v < k; ++v)
      if (r.degree(v) != 2) cycle = false;
    if (cycle) removed[0] = 1;  // whole contraction graph is one cycle
  }
  auto rdeg = [&](int v) {
    int c = 0;
    for (int w : r.adj[v])
      if (!removed[w]) ++c;
    return c;
  };
  std::vector<char> seen(k, 0);
  std::vector<std::vector<int>> fpaths;
  auto walk_from = [&](int v) {
    std::vector<int> f;
    int prev = -1, cur = v;
    while (cur >= 0) {
      seen[cur] = 1;
      f.push_back(cur);
      int nxt = -1;
      for (int w : r.adj[cur])
        if (!removed[w] && !seen[w] && w != prev) {
          nxt = w;
          break;
        }
      prev = cur;
      cur = nxt;
    }
    if (f.back() < f.front()) std::reverse(f.begin(), f.end());
    fpaths.push_back(std::move(f));
  };
  for (int v = 0; v < k; ++v)
    if (!removed[v] && !seen[v] && rdeg(v) <= 1) walk_from(v);
  for (int v = 0; v < k; ++v)
    if (!removed[v] && !seen[v]) {
      // leftover cycle component: drop its lowest-id vertex
      removed[v] = 1;
      for (int w : r.adj[v])
        if (!removed[w] && !seen[w] && rdeg(w) <= 1) {
          walk_from(w);
          break;
        }
    }
  auto part = pp.part_of(g);
  for (const auto& f : fpaths) {
    int len = static_cast<int>(f.size());
    if (len < 10) continue;
    int x = 3 * ((len + 8) / 9) - 1;
    NodeId a = pp.paths[f[x]].first();
    NodeId b = pp.paths[f[2 * x - 1]].first();
    Walk w = bfs_path(g, a, b);
    Walk wp;
    bool have = false;
    try {
      std::vector<NodeId> ends = pp.paths[f[0]].nodes;
      ends.insert(ends.end(), pp.paths[f[2 * x]].nodes.begin(),
                  pp.paths[f[2 * x]].nodes.end());
      wp = clip_walk(w, pp.paths[f[x]].nodes, ends, g.n());
      have = true;
    } catch (const GraphError&) {
      // the walk ends inside the window: clip the suffix after the last
      // f_x visit between the extreme covered parts instead
      std::unordered_map<int, int> pos;
      for (int j = 0; j < len; ++j) pos[f[j]] = j;
      int last_x = -1;
      for (int j = 0; j < static_cast<int>(w.nodes.size()); ++j)
        if (part[w.nodes[j]] == f[x]) last_x = j;
      if (last_x >= 0) {
        Walk suffix;
        suffix.nodes.assign(w.nodes.begin() + last_x, w.nodes.end());
        int lo = len, hi = -1;
        for (NodeId nd : suffix.nodes) {
          int p = part[nd] < 0 ? -1 : part[nd];
          auto it = p < 0 ? pos.end() : pos.find(p);
          if (it == pos.end()) continue;
          lo = std::min(lo, it->second);
          hi = std::max(hi, it->second);
        }
        if (lo <= hi && hi > lo) {
          try {
            wp = clip_walk(suffix, pp.paths[f[lo]].nodes,
                           pp.paths[f[hi]].nodes, g.n());
            have = true;
          } catch (const GraphError&) {
          }
        }
      }
    }
    if (!have) continue;
    // covered window in walk order, from the part of wp's first node toward
    // the part of its last node
    std::unordered_map<int, int> pos;
    for (int j = 0; j < len; ++j) pos[f[j]] = j;
    int p0 = part[wp.first()], p1 = part[wp.last()];
    if (p0 < 0 || p1 < 0 || !pos.count(p0) || !pos.count(p1)) continue;
    int lo = pos[p0], hi = pos[p1];
    int step = hi >= lo ? 1 : -1;
    std::vector<int> window;
    for (int j = lo; j != hi + step; j += step) window.push_back(f[j]);
    emit_triple_crowns(g, pp, part, wp, window, d, out);
  }
  return out;
}

Crown merge_crowns(const Graph& g, const PartPaths& pp,
                   std::vector<Crown> crowns) {
  if (crowns.empty()) throw GadgetError("merge_crowns: empty crown list");
  int k = pp.k();
  {
    std::vector<char> used(k, 0);
    for (const auto& c : crowns)
      for (int a : c.parts) {
        if (used[a]) throw GadgetError("merge_crowns: crowns share part");
        used[a] = 1;
      }
  }
  if (crowns.size() == 1) return crowns[0];
  int n = g.n();
  int c0 = static_cast<int>(crowns.size());
  auto part = pp.part_of(g);
  std::vector<std::set<EdgeId>> t_of(c0);
  std::vector<std::set<int>> a_of(c0), u_of(c0);
  for (int c = 0; c < c0; ++c) {
    t_of[c].insert(crowns[c].tree_edges.begin(), crowns[c].tree_edges.end());
    a_of[c].insert(crowns[c].parts.begin(), crowns[c].parts.end());
    u_of[c].insert(crowns[c].useful.begin(), crowns[c].useful.end());
  }
  auto nodes_of = [&](int c) {
    std::vector<NodeId> out;
    for (int a : a_of[c])
      out.insert(out.end(), pp.paths[a].nodes.begin(),
                 pp.paths[a].nodes.end());
    return out;
  };
  const int inf = std::numeric_limits<int>::max();
  std::vector<std::vector<int>> dist(c0, std::vector<int>(c0, inf));
  for (int c = 0; c < c0; ++c) {
    auto d = bfs_distances(g, nodes_of(c));
    for (int c2 = 0; c2 < c0; ++c2) {
      if (c2 == c) continue;
      for (NodeId v : nodes_of(c2))
        if (d[v] >= 0) dist[c][c2] = std::min(dist[c][c2], d[v]);
    }
  }
  std::vector<char> alive(c0, 1);
  int alive_count = c0;
  std::vector<int> bstamp(n, -1), bparent(n);
  int version = 0;
  while (alive_count > 1) {
    int bi = -1, bj = -1, best = inf;
    for (int i = 0; i < c0; ++i) {
      if (!alive[i]) continue;
      for (int j = i + 1; j < c0; ++j)
        if (alive[j] && dist[i][j] < best) {
          best = dist[i][j];
          bi = i;
          bj = j;
        }
    }
    if (bi < 0) throw GadgetError("merge_crowns: crowns unreachable");
    // shortest connecting path; its interior avoids every crowned part-path
    // because (bi, bj) is the globally closest pair
    ++version;
    std::vector<NodeId> order = nodes_of(bi);
    for (NodeId v : order) {
      bstamp[v] = version;
      bparent[v] = -1;
    }
    std::vector<char> target(n, 0);
    for (NodeId v : nodes_of(bj)) target[v] = 1;
    NodeId hit = -1;
    for (size_t h = 0; h < order.size() && hit < 0; ++h) {
      NodeId v = order[h];
      for (NodeId w : g.neighbors(v)) {
        if (bstamp[w] == version) continue;
        bstamp[w] = version;
        bparent[w] = v;
        if (target[w]) {
          hit = w;
          break;
        }
        order.push_back(w);
      }
    }
    if (hit < 0) throw GadgetError("merge_crowns: no connecting path");
    Walk q;
    for (NodeId x = hit; x >= 0; x = bparent[x]) q.nodes.push_back(x);
    std::reverse(q.nodes.begin(), q.nodes.end());
    t_of[bi].insert(t_of[bj].begin(), t_of[bj].end());
    a_of[bi].insert(a_of[bj].begin(), a_of[bj].end());
    u_of[bi].insert(u_of[bj].begin(), u_of[bj].end());
    add_walk_edges(g, q, t_of[bi]);
    for (NodeId endpoint : {q.first(), q.last()}) {
      int pe = part[endpoint];
      if (pe >= 0 && u_of[bi].count(pe)) {
        u_of[bi].erase(pe);  // the connection lands on a useful part
        add_walk_edges(g, pp.paths[pe], t_of[bi]);
      }
    }
    alive[bj] = 0;
    --alive_count;
    for (int z = 0; z < c0; ++z)
      if (alive[z] && z != bi) {
        dist[bi][z] = std::min(dist[bi][z], dist[bj][z]);
        dist[z][bi] = dist[bi][z];
      }
  }
  int root = -1;
  for (int c = 0; c < c0; ++c)
    if (alive[c]) root = c;
  Crown out;
  out.tree_edges.assign(t_of[root].begin(), t_of[root].end());
  out.parts.assign(a_of[root].begin(), a_of[root].end());
  out.useful.assign(u_of[root].begin(), u_of[root].end());
  return out;
}

CrownResult crown_from_pairs(const Graph& g, const PartPaths& initial,
                             int diameter_hint) {
  initial.validate(g);
  int k = initial.k();
  if (k < 9)
    throw GadgetError("construction needs at least 9 pairs (got " +
                      std::to_string(k) + ")");
  CrownResult res;
  res.paths = minimalize_paths(g, initial);
  ContractionGraph r = build_contraction_graph(g, res.paths);
  res.diameter = diameter_hint >= 0 ? diameter_hint : diameter(g);
  std::vector<char> gplus(k, 0);
  for (int v = 0; v < k; ++v)
    if (r.degree(v) >= 3) {
      gplus[v] = 1;
      for (int w : r.adj[v]) gplus[w] = 1;
    }
  int gp = 0;
  for (int v = 0; v < k; ++v) gp += gplus[v];
  double frac = static_cast<double>(gp) / k;
  auto sum_a = [](const std::vector<Crown>& cs) {
    size_t s = 0;
    for (const auto& c : cs) s += c.parts.size();
    return s;
  };
  std::vector<Crown> crowns;
  if (frac >= 0.05 && frac <= 0.2) {
    auto hi = crowns_high_degree(g, r, res.paths);
    auto lo = crowns_low_degree(g, r, res.paths, res.diameter);
    crowns = sum_a(hi) >= sum_a(lo) ? std::move(hi) : std::move(lo);
  } else if (frac >= 0.1) {
    crowns = crowns_high_degree(g, r, res.paths);
  } else {
    crowns = crowns_low_degree(g, r, res.paths, res.diameter);
  }
  if (crowns.empty())
    throw GadgetError("construction shortfall: no crowns found");
  res.crown = merge_crowns(g, res.paths, crowns);
  if (crowns.size() == 1) {
    res.universe.resize(k);
    std::iota(res.universe.begin(), res.universe.end(), 0);
  } else {
    res.universe = res.crown.parts;
  }
  int need = (k + 279) / 280;
  if (static_cast<int>(res.crown.useful.size()) < need)
    throw GadgetError("construction shortfall: |U| = " +
                      std::to_string(res.crown.useful.size()) +
                      " < ceil(k/280) = " + std::to_string(need));
  auto chk = validate_crown(g, res.paths, res.crown, res.universe,
                            res.diameter);
  if (!chk.ok)
    throw GadgetError("construction shortfall: merged crown invalid: " +
                      chk.reason);
  return res;
}

RelaxedGadget crown_to_relaxed(const Graph& g, const Crown& crown,
                               const PartPaths& pp) {
  int n = g.n(), k = pp.k();
  auto part = pp.part_of(g);
  auto inT = node_mask(g, crown.tree_edges);
  std::vector<char> inU(k, 0);
  for (int u : crown.useful) inU[u] = 1;
  const auto& us = crown.useful;
  int usz = static_cast<int>(us.size());
  std::vector<int> upos(k, -1);
  for (int i = 0; i < usz; ++i) upos[us[i]] = i;
  // endpoint-to-T walks, clipped at the first touch of a foreign useful
  // part-path; the clip target becomes an interference edge
  std::vector<Walk> walks(2 * usz);
  std::vector<std::set<int>> interfere(usz);
  std::vector<int> bstamp(n, -1), bparent(n);
  int version = 0;
  for (int ui = 0; ui < usz; ++ui) {
    int i = us[ui];
    NodeId eps[2] = {pp.paths[i].first(), pp.paths[i].last()};
    for (int side = 0; side < 2; ++side) {
      NodeId s = eps[side];
      Walk f;
      if (inT[s]) {
        f.nodes = {s};
      } else {
        ++version;
        std::vector<NodeId> order{s};
        bstamp[s] = version;
        bparent[s] = -1;
        NodeId hit = -1;
        for (size_t h = 0; h < order.size() && hit < 0; ++h) {
          NodeId v = order[h];
          for (NodeId w : g.neighbors(v)) {
            if (bstamp[w] == version) continue;
            bstamp[w] = version;
            bparent[w] = v;
            if (inT[w]) {
              hit = w;
              break;
            }
            order.push_back(w);
          }
        }
        if (hit < 0)
          throw GadgetError("construction shortfall: endpoint cannot reach T");
        for (NodeId x = hit; x >= 0; x = bparent[x]) f.nodes.push_back(x);
        std::reverse(f.nodes.begin(), f.nodes.end());
      }
      for (int j = 1; j < static_cast<int>(f.nodes.size()); ++j) {
        int pj = part[f.nodes[j]];
        if (pj >= 0 && pj != i && inU[pj]) {
          f.nodes.resize(j + 1);
          interfere[ui].insert(upos[pj]);
          interfere[upos[pj]].insert(ui);
          break;
        }
      }
      walks[2 * ui + side] = std::move(f);
    }
  }
  // greedy minimum-degree independent set (>= |U|/5 since the undirected
  // interference degree averages at most 4)
  std::vector<char> dead(usz, 0);
  std::vector<int> keep;
  while (true) {
    int best = -1, bestdeg = 0;
    for (int ui = 0; ui < usz; ++ui) {
      if (dead[ui]) continue;
      int deg = 0;
      for (int v : interfere[ui])
        if (!dead[v]) ++deg;
      if (best < 0 || deg < bestdeg) {
        best = ui;
        bestdeg = deg;
      }
    }
    if (best < 0) break;
    keep.push_back(best);
    dead[best] = 1;
    for (int v : interfere[best]) dead[v] = 1;
  }
  std::sort(keep.begin(), keep.end());
  if (5 * static_cast<int>(keep.size()) < usz)
    throw GadgetError("construction shortfall: independent set " +
                      std::to_string(keep.size()) + " < |U|/5");
  std::set<EdgeId> t2(crown.tree_edges.begin(), crown.tree_edges.end());
  std::vector<char> kept_mask(usz, 0);
  for (int ui : keep) kept_mask[ui] = 1;
  auto inT2 = inT;
  for (int ui = 0; ui < usz; ++ui)
    if (!kept_mask[ui]) {
      add_walk_edges(g, pp.paths[us[ui]], t2);
      for (NodeId v : pp.paths[us[ui]].nodes) inT2[v] = 1;
    }
  RelaxedGadget rg;
  for (int ui : keep) {
    int i = us[ui];
    Walk pi = pp.paths[i];
    for (int side = 0; side < 2; ++side) {
      Walk f = walks[2 * ui + side];
      if (f.length() == 0) continue;
      // clip at the first node already absorbed into T'
      for (int j = 1; j < static_cast<int>(f.nodes.size()); ++j)
        if (inT2[f.nodes[j]]) {
          f.nodes.resize(j + 1);
          break;
        }
      std::unordered_map<NodeId, int> pos;
      for (int j = 0; j < static_cast<int>(pi.nodes.size()); ++j)
        pos.emplace(pi.nodes[j], j);
      int tstar = 0;
      for (int j = 0; j < static_cast<int>(f.nodes.size()); ++j)
        if (pos.count(f.nodes[j])) tstar = j;
      int at = pos[f.nodes[tstar]];
      Walk merged;
      if (side == 0) {
        merged.nodes.assign(f.nodes.begin(), f.nodes.begin() + tstar + 1);
        merged.nodes.insert(merged.nodes.end(), pi.nodes.begin() + at + 1,
                            pi.nodes.end());
      } else {
        merged.nodes.assign(pi.nodes.begin(), pi.nodes.begin() + at);
        for (int j = tstar; j >= 0; --j) merged.nodes.push_back(f.nodes[j]);
      }
      pi = merged.simplified();
      add_walk_edges(g, f, t2);
      for (NodeId v : f.nodes) inT2[v] = 1;
    }
    rg.paths.push_back(std::move(pi));
    rg.pair_ids.push_back(i);
  }
  rg.tree_edges.assign(t2.begin(), t2.end());
  return rg;
}

RelaxedCheck validate_relaxed(const Graph& g, const RelaxedGadget& rg, int d) {
  RelaxedCheck out;
  if (rg.paths.empty()) {
    out.reason = "no paths";
    return out;
  }
  std::vector<char> used(g.n(), 0);
  for (const auto& p : rg.paths) {
    if (p.nodes.empty() || !p.valid_in(g) || !p.simple()) {
      out.reason = "invalid or non-simple path";
      return out;
    }
    for (NodeId v : p.nodes) {
      if (used[v]) {
        out.reason = "paths are not vertex-disjoint";
        return out;
      }
      used[v] = 1;
    }
  }
  if (rg.tree_edges.empty() || !edges_connected(g, rg.tree_edges)) {
    out.reason = "T is empty or disconnected";
    return out;
  }
  auto inT = node_mask(g, rg.tree_edges);
  int worst = 0;
  for (const auto& p : rg.paths) {
    if (!inT[p.first()] || !inT[p.last()]) {
      out.reason = "T misses a path endpoint";
      return out;
    }
    std::vector<int> marks;
    for (int j = 0; j < static_cast<int>(p.nodes.size()); ++j)
      if (inT[p.nodes[j]]) marks.push_back(j);
    if (interval_cover_count(marks, d) > 3) {
      out.reason = "T intersection needs more than 3 subpaths of length " +
                   std::to_string(d);
      return out;
    }
    int lo = 0, hi = d;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (interval_cover_count(marks, mid) <= 3)
        hi = mid;
      else
        lo = mid + 1;
    }
    worst = std::max(worst, lo);
  }
  out.coverage_d = worst;
  out.ok = true;
  return out;
}

StrictGadget strictify(const Graph& g, const RelaxedGadget& rg,
                       const MovingCut& mc, std::int64_t beta, int d) {
  if (beta < 9 * static_cast<std::int64_t>(d))
    throw GadgetError("hypothesis violated: beta = " + std::to_string(beta) +
                      " < 9d = " + std::to_string(9 * d));
  if (static_cast<int>(mc.ell.size()) != g.m())
    throw GadgetError("cut length vector does not match the graph");
  int kp = static_cast<int>(rg.paths.size());
  MovingCut hat = mc;
  for (int si = 0; 30001 * cut_capacity(hat) >= kp; ++si) {
    if (si > 400) throw GadgetError("capacity scaling did not converge");
    hat = scale_cut(mc, scale_schedule(si));
  }
  PairSet all_pairs;
  for (const auto& p : rg.paths) all_pairs.pairs.emplace_back(p.first(), p.last());
  std::int64_t bh = cut_distance(g, hat, all_pairs);
  auto inT = node_mask(g, rg.tree_edges);
  struct Kept {
    Walk path;
    int pair_id;
    std::vector<std::pair<int, int>> trims;  // trimmed position ranges
    int src_index;                           // index into rg.paths
  };
  std::vector<Kept> kept;
  for (int i = 0; i < kp; ++i) {
    const auto& p = rg.paths[i];
    auto eids = p.edge_ids(g);
    bool unit = true;
    for (EdgeId e : eids)
      if (hat.ell[e] != 1) unit = false;
    if (!unit) continue;
    std::vector<int> marks;
    for (int j = 0; j < static_cast<int>(p.nodes.size()); ++j)
      if (inT[p.nodes[j]]) marks.push_back(j);
    if (marks.empty() || marks.front() != 0 ||
        marks.back() != p.length())
      continue;  // relaxed validity covers endpoints; skip defensively
    auto cover = interval_cover(marks, d);
    if (cover.size() > 3) continue;
    // complement segments between consecutive cover intervals, boundary
    // nodes included so the kept piece keeps its endpoints inside H
    int bu = -1, bv = -1;
    std::int64_t blen = -1;
    for (size_t c = 0; c + 1 < cover.size(); ++c) {
      int u = cover[c].second, v = cover[c + 1].first;
      std::int64_t len = v - u;  // all-unit edges
      if (len > blen) {
        blen = len;
        bu = u;
        bv = v;
      }
    }
    if (blen < 3 || 2 * blen < bh - 3 * static_cast<std::int64_t>(d)) continue;
    Kept kk;
    kk.path.nodes.assign(p.nodes.begin() + bu, p.nodes.begin() + bv + 1);
    kk.pair_id = rg.pair_ids[i];
    kk.src_index = i;
    // trims: everything outside [bu, bv]
    if (bu > 0) kk.trims.emplace_back(0, bu);
    if (bv < p.length()) kk.trims.emplace_back(bv, p.length());
    kept.push_back(std::move(kk));
  }
  if (kept.empty())
    throw GadgetError(
        "construction shortfall: no all-unit path retains a heavy segment");
  std::set<EdgeId> hset(rg.tree_edges.begin(), rg.tree_edges.end());
  for (const auto& kk : kept) {
    const auto& nodes = rg.paths[kk.src_index].nodes;
    for (auto [a, b] : kk.trims)
      for (int j = a; j < b; ++j) {
        auto e = g.edge_id(nodes[j], nodes[j + 1]);
        hset.insert(*e);
      }
  }
  std::vector<EdgeId> hedges(hset.begin(), hset.end());
  if (!edges_connected(g, hedges))
    throw GadgetError("construction shortfall: absorbed subgraph disconnected");
  // BFS spanning tree of the absorbed subgraph
  std::vector<char> ine(g.m(), 0);
  for (EdgeId e : hedges) ine[e] = 1;
  auto inH = node_mask(g, hedges);
  std::vector<EdgeId> tree;
  {
    NodeId start = -1;
    for (int v = 0; v < g.n() && start < 0; ++v)
      if (inH[v]) start = v;
    std::vector<char> seen(g.n(), 0);
    std::queue<NodeId> q;
    q.push(start);
    seen[start] = 1;
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop();
      const auto& nb = g.neighbors(v);
      const auto& ei = g.incident_edges(v);
      for (size_t j = 0; j < nb.size(); ++j) {
        if (!ine[ei[j]] || seen[nb[j]]) continue;
        seen[nb[j]] = 1;
        tree.push_back(ei[j]);
        q.push(nb[j]);
      }
    }
  }
  std::sort(tree.begin(), tree.end());
  // greedy farthest-pair filtering until all cross ell-distances clear
  // beta_hat / (4 ceil(log2 k))
  std::int64_t tau = bh / (4 * ceil_log2(std::max(kp, 2)));
  std::int64_t final_beta = 0;
  while (true) {
    int kc = static_cast<int>(kept.size());
    std::vector<std::vector<std::int64_t>> cross(
        kc, std::vector<std::int64_t>(kc, 0));
    std::int64_t mind = std::numeric_limits<std::int64_t>::max();
    for (int i = 0; i < kc; ++i) {
      auto dd = ell_distances(g, hat.ell, {kept[i].path.first()});
      for (int j = 0; j < kc; ++j) {
        cross[i][j] = dd[kept[j].path.last()];
        mind = std::min(mind, cross[i][j]);
      }
    }
    if (mind >= std::max<std::int64_t>(tau, 1)) {
      final_beta = mind;
      break;
    }
    if (kc == 1)
      throw GadgetError(
          "construction shortfall: cross distances below threshold");
    std::vector<int> bad(kc, 0);
    for (int i = 0; i < kc; ++i)
      for (int j = 0; j < kc; ++j)
        if (cross[i][j] < std::max<std::int64_t>(tau, 1)) {
          ++bad[i];
          ++bad[j];
        }
    int drop = 0;
    for (int i = 1; i < kc; ++i)
      if (bad[i] > bad[drop]) drop = i;
    kept.erase(kept.begin() + drop);
  }
  StrictGadget sg;
  for (auto& kk : kept) {
    sg.paths.push_back(std::move(kk.path));
    sg.pair_ids.push_back(kk.pair_id);
  }
  sg.tree_edges = std::move(tree);
  sg.cut = std::move(hat);
  sg.beta = final_beta;
  sg.capacity = cut_capacity(sg.cut);
  if (sg.capacity >= static_cast<std::int64_t>(sg.paths.size()))
    throw GadgetError("construction shortfall: capacity >= |P|");
  return sg;
}

GadgetCheck validate_strict(const Graph& g, const StrictGadget& sg) {
  GadgetCheck out;
  if (sg.paths.empty()) {
    out.reason = "no paths";
    return out;
  }
  std::vector<char> used(g.n(), 0);
  for (const auto& p : sg.paths) {
    if (!p.valid_in(g) || !p.simple()) {
      out.reason = "invalid or non-simple path";
      return out;
    }
    if (p.length() < 3) {
      out.reason = "path of hop length < 3";
      return out;
    }
    for (NodeId v : p.nodes) {
      if (used[v]) {
        out.reason = "paths are not vertex-disjoint";
        return out;
      }
      used[v] = 1;
    }
  }
  std::set<EdgeId> uniq(sg.tree_edges.begin(), sg.tree_edges.end());
  if (uniq.size() != sg.tree_edges.size()) {
    out.reason = "duplicate tree edges";
    return out;
  }
  if (sg.tree_edges.empty() || !edges_connected(g, sg.tree_edges)) {
    out.reason = "T is empty or disconnected";
    return out;
  }
  auto inT = node_mask(g, sg.tree_edges);
  int tnodes = 0;
  for (int v = 0; v < g.n(); ++v) tnodes += inT[v];
  if (static_cast<int>(sg.tree_edges.size()) != tnodes - 1) {
    out.reason = "T has a cycle";
    return out;
  }
  for (const auto& p : sg.paths) {
    if (!inT[p.first()] || !inT[p.last()]) {
      out.reason = "T misses a path endpoint";
      return out;
    }
    for (size_t j = 1; j + 1 < p.nodes.size(); ++j)
      if (inT[p.nodes[j]]) {
        out.reason = "T touches a path interior";
        return out;
      }
  }
  if (static_cast<int>(sg.cut.ell.size()) != g.m()) {
    out.reason = "cut length vector does not match the graph";
    return out;
  }
  for (int l : sg.cut.ell)
    if (l < 1) {
      out.reason = "cut has a length < 1";
      return out;
    }
  if (cut_capacity(sg.cut) != sg.capacity) {
    out.reason = "recorded capacity mismatch";
    return out;
  }
  if (sg.capacity >= static_cast<std::int64_t>(sg.paths.size())) {
    out.reason = "capacity >= |P|";
    return out;
  }
  if (sg.beta < 1) {
    out.reason = "beta < 1";
    return out;
  }
  PairSet pairs;
  for (const auto& p : sg.paths) pairs.pairs.emplace_back(p.first(), p.last());
  if (cut_distance(g, sg.cut, pairs) < sg.beta) {
    out.reason = "cut distance below recorded beta";
    return out;
  }
  out.ok = true;
  return out;
}

PipelineResult gadget_pipeline(const Graph& g, const PartPaths& paths) {
  paths.validate(g);
  PipelineResult res;
  int dg = diameter(g);
  PairSet pairs = PairSet::from_part_paths(paths);
  auto cut = search_cut_lp(g, pairs);
  res.beta_in = cut.beta;
  bool weak = cut.beta < 9 * static_cast<std::int64_t>(dg);
  auto attempt = [&]() {
    CrownResult cr = crown_from_pairs(g, paths, dg);
    RelaxedGadget rg = crown_to_relaxed(g, cr.crown, cr.paths);
    RelaxedCheck rc = validate_relaxed(g, rg, cr.diameter);
    if (!rc.ok)
      throw GadgetError("relaxed gadget failed validation: " + rc.reason);
    int deff = std::min(cr.diameter, rc.coverage_d);
    res.d_used = deff;
    if (cut.beta < 9 * static_cast<std::int64_t>(deff))
      throw GadgetError("hypothesis violated: beta " +
                        std::to_string(cut.beta) + " < 9d " +
                        std::to_string(9 * deff));
    PairSet rpairs;
    for (const auto& p : rg.paths)
      rpairs.pairs.emplace_back(p.first(), p.last());
    auto rcut = search_cut_lp(g, rpairs);
    std::int64_t beta = std::max<std::int64_t>(
        rcut.beta, cut_distance(g, cut.cut, rpairs));
    const MovingCut& use =
        rcut.beta >= cut_distance(g, cut.cut, rpairs) ? rcut.cut : cut.cut;
    res.gadget = strictify(g, rg, use, beta, deff);
    auto chk = validate_strict(g, res.gadget);
    if (!chk.ok)
      throw GadgetError("strict gadget failed validation: " + chk.reason);
    res.note = "strict gadget, beta' = " + std::to_string(res.gadget.beta);
  };
  if (!weak) {
    attempt();  // errors propagate: the hypothesis of the reduction held
    return res;
  }
  try {
    attempt();
  } catch (const GadgetError& e) {
    res.diameter_regime = true;
    res.note = "diameter regime: beta " + std::to_string(cut.beta) +
               " < 9 * diameter " + std::to_string(9 * dg) + " (" + e.what() +
               ")";
  }
  return res;
}

void write_gadget_certificate(const std::string& path, const Graph& g,
                              const StrictGadget& sg) {
  nlohmann::json j;
  j["paths"] = nlohmann::json::array();
  for (const auto& p : sg.paths) j["paths"].push_back(p.nodes);
  j["pair_ids"] = sg.pair_ids;
  j["tree_edges"] = nlohmann::json::array();
  for (EdgeId e : sg.tree_edges) {
    auto [u, v] = g.edge(e);
    j["tree_edges"].push_back({u, v});
  }
  j["lengths"] = nlohmann::json::array();
  for (EdgeId e = 0; e < g.m(); ++e)
    if (sg.cut.ell[e] > 1) {
      auto [u, v] = g.edge(e);
      j["lengths"].push_back({u, v, sg.cut.ell[e]});
    }
  j["beta"] = sg.beta;
  j["capacity"] = sg.capacity;
  std::ofstream out(path);
  if (!out) throw GadgetError("cannot write " + path);
  out << j.dump(2) << "\n";
}

StrictGadget read_gadget_certificate(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw GadgetError("cannot read " + path);
  nlohmann::json j;
  in >> j;
  StrictGadget sg;
  for (const auto& pn : j.at("paths")) {
    Walk w;
    for (const auto& v : pn) w.nodes.push_back(v.get<int>());
    sg.paths.push_back(std::move(w));
  }
  if (j.count("pair_ids"))
    sg.pair_ids = j["pair_ids"].get<std::vector<int>>();
  else
    sg.pair_ids.assign(sg.paths.size(), -1);
  for (const auto& te : j.at("tree_edges")) {
    auto e = g.edge_id(te[0].get<int>(), te[1].get<int>());
    if (!e) throw GadgetError("certificate tree edge missing from graph");
    sg.tree_edges.push_back(*e);
  }
  sg.cut = MovingCut::unit(g);
  for (const auto& le : j.at("lengths")) {
    auto e = g.edge_id(le[0].get<int>(), le[1].get<int>());
    if (!e) throw GadgetError("certificate length edge missing from graph");
    sg.cut.ell[*e] = le[2].get<int>();
  }
  sg.beta = j.at("beta").get<std::int64_t>();
  sg.capacity = j.at("capacity").get<std::int64_t>();
  return sg;
}

}  // namespace shortcutlab
