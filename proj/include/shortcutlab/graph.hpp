#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace shortcutlab {

using NodeId = int;
using EdgeId = int;

class GraphError : public std::runtime_error {
 public:
  explicit GraphError(const std::string& what) : std::runtime_error(what) {}
};

/// Undirected, simple, connected graph with dense node ids 0..n-1.
/// Adjacency lists are sorted by node id; edges are stored once as (u, v)
/// with u < v and addressable by a stable EdgeId.
class Graph {
 public:
  Graph() = default;

  // Validates simplicity and connectivity; throws GraphError with component
  // sizes when the input is disconnected.
  static Graph from_edges(int n, std::vector<std::pair<int, int>> edges);

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(NodeId v) const { return adj_[v]; }
  const std::vector<EdgeId>& incident_edges(NodeId v) const {
    return adj_eid_[v];
  }

  bool has_edge(NodeId u, NodeId v) const {
    return edge_id(u, v).has_value();
  }
  std::optional<EdgeId> edge_id(NodeId u, NodeId v) const;
  std::pair<int, int> edge(EdgeId e) const { return edges_[e]; }
  // The endpoint of e that is not v.
  NodeId other_end(EdgeId e, NodeId v) const {
    auto [a, b] = edges_[e];
    return a == v ? b : a;
  }

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<EdgeId>> adj_eid_;
  std::unordered_map<std::int64_t, EdgeId> edge_index_;
};

/// A walk: consecutive nodes adjacent in the host graph. |w| = nodes-1.
struct Walk {
  std::vector<NodeId> nodes;

  int length() const { return static_cast<int>(nodes.size()) - 1; }
  NodeId first() const { return nodes.front(); }
  NodeId last() const { return nodes.back(); }
  bool empty() const { return nodes.empty(); }

  // Checks adjacency of consecutive nodes.
  bool valid_in(const Graph& g) const;
  // True if no node repeats.
  bool simple() const;
  Walk reversed() const;
  // Removes loops in place, keeping a simple path with the same endpoints.
  Walk simplified() const;
  // Edge ids traversed (requires validity).
  std::vector<EdgeId> edge_ids(const Graph& g) const;
};

/// k simple, pairwise vertex-disjoint paths; endpoints (s_i, t_i) are the
/// first and last node of each path.
struct PartPaths {
  std::vector<Walk> paths;

  int k() const { return static_cast<int>(paths.size()); }
  std::pair<NodeId, NodeId> endpoints(int i) const {
    return {paths[i].first(), paths[i].last()};
  }
  // part index per node, -1 for nodes on no part-path.
  std::vector<int> part_of(const Graph& g) const;
  // Throws GraphError if paths are not simple/disjoint/valid or k < 1.
  void validate(const Graph& g) const;
};

struct PairSet {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  int k() const { return static_cast<int>(pairs.size()); }
  std::vector<NodeId> sources() const;
  std::vector<NodeId> sinks() const;
  static PairSet from_part_paths(const PartPaths& pp);
};

// ---- distance primitives -------------------------------------------------

// Single-source BFS distances. unreachable = -1 (cannot happen on a Graph,
// but the helper also serves subgraph searches via the allowed mask).
std::vector<int> bfs_distances(const Graph& g, NodeId source);
std::vector<int> bfs_distances(const Graph& g, const std::vector<NodeId>& sources);

// Shortest path u -> v (BFS, lowest-id tie-break via sorted adjacency).
Walk bfs_path(const Graph& g, NodeId u, NodeId v);

// Hop diameter, exact (iFUB on large graphs, plain all-pairs BFS when small).
int diameter(const Graph& g);

// Eccentricity of v.
int eccentricity(const Graph& g, NodeId v);

// Min ell-weighted distance between node sets X and Y; lengths must all be
// >= 1 (one per EdgeId), otherwise GraphError. Dijkstra, ties broken toward
// the lowest node id.
std::int64_t ell_distance(const Graph& g, const std::vector<int>& lengths,
                          const std::vector<NodeId>& xs,
                          const std::vector<NodeId>& ys);

// Dijkstra distances from a source set under integer lengths >= 1.
std::vector<std::int64_t> ell_distances(const Graph& g,
                                        const std::vector<int>& lengths,
                                        const std::vector<NodeId>& sources);

// ---- walk operations -----------------------------------------------------

// Subwalk from the last step in A to the first later step in B.
// Throws GraphError("clip undefined") when no B-visit follows the last
// A-visit.
Walk clip_walk(const Walk& w, const std::vector<char>& in_a,
               const std::vector<char>& in_b);
Walk clip_walk(const Walk& w, const std::vector<NodeId>& a,
               const std::vector<NodeId>& b, int n);

// Projection of a G-walk onto part indices: map each node to its part (or
// bottom), drop bottoms, merge consecutive duplicates.
std::vector<int> project_walk(const Walk& w, const std::vector<int>& part_of);

// ---- heavy-light decomposition ------------------------------------------

// Labels follow the path-forming convention: each non-leaf node has exactly
// one child edge labeled light (toward the child of largest subtree size,
// ties to the lowest child id); light edges form vertex-disjoint downward
// paths and every root-to-leaf path crosses at most ceil(log2 n) heavy
// edges.
struct HeavyLightDecomposition {
  std::vector<int> parent;           // parent[root] = -1
  NodeId root = 0;
  std::vector<char> light_to_parent; // per node: edge to parent is light
  std::vector<int> subtree_size;
  std::vector<Walk> light_paths;     // maximal light paths, top-down order
};

// tree: adjacency of a tree on its own node ids (0..n-1). Throws on
// non-tree input.
HeavyLightDecomposition heavy_light(const std::vector<std::vector<int>>& tree,
                                    NodeId root);

// ---- biconnectivity ------------------------------------------------------

struct BiconnectedResult {
  std::vector<std::vector<NodeId>> components;  // node sets, sorted
  int d_bcc = 0;  // max induced-subgraph diameter over components
};

BiconnectedResult biconnected(const Graph& g);

}  // namespace shortcutlab
