#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "shortcutlab/graph.hpp"

namespace shortcutlab {

// splitmix64: the deterministic hash behind all seed derivation.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  return mix64(mix64(mix64(seed ^ mix64(a)) ^ mix64(b)) ^ mix64(c));
}

Graph gen_cycle(int n);
Graph gen_grid(int rows, int cols);
Graph gen_random_tree(int n, std::uint64_t seed);
// G(n, p) resampled until connected (bounded retries).
Graph gen_random_connected(int n, double p, std::uint64_t seed);

// k horizontal paths with L edges each; the 2k endpoints are the leaves of
// one balanced binary tree (all s_i in the left half, all t_i mirrored in
// the right half), so every s-to-t route off a path crosses the tree root.
struct GadgetFamilyInstance {
  Graph graph;
  PartPaths paths;  // the k horizontal paths, in order
  std::vector<NodeId> tree_nodes;
  std::vector<EdgeId> tree_edges;
  NodeId tree_root;
};

GadgetFamilyInstance gen_gadget_family(int k, int path_len);

// Greedy sampler for vertex-disjoint connectable pairs: repeatedly draws an
// unused pair and keeps it when a path through unused nodes exists. Returns
// as many pairs as found (possibly fewer than k) with their witness paths.
struct SampledPairs {
  PairSet pairs;
  PartPaths paths;
};

SampledPairs sample_connectable_pairs(const Graph& g, int k,
                                      std::uint64_t seed);

}  // namespace shortcutlab
