#pragma once

#include <cstdint>
#include <string>

#include "shortcutlab/graph.hpp"
#include "shortcutlab/moving_cut.hpp"

namespace shortcutlab {

class GadgetError : public std::runtime_error {
 public:
  explicit GadgetError(const std::string& what) : std::runtime_error(what) {}
};

/// Parts contracted to single vertices: edge {i,j} iff some simple G-path
/// connects p_i to p_j with all internal nodes off every part-path. One
/// witness path is stored per edge, oriented from the lower part index.
struct ContractionGraph {
  int k = 0;
  std::vector<std::pair<int, int>> edges;  // i < j
  std::vector<Walk> witness;               // per edge
  std::vector<std::vector<int>> adj;       // sorted neighbor part lists

  int degree(int i) const { return static_cast<int>(adj[i].size()); }
  const Walk& witness_for(int i, int j) const;
};

ContractionGraph build_contraction_graph(const Graph& g, const PartPaths& pp);

/// A connected edge set T together with the parts it consumes (A) and the
/// parts it keeps useful (U subset of A):
///   1. |U| >= |A|/4 + 2
///   2. T avoids p_i for every universe part i outside A
///   3. for i in U, T meets p_i inside a single subpath of length <= D
struct Crown {
  std::vector<EdgeId> tree_edges;  // T
  std::vector<int> parts;          // A, sorted
  std::vector<int> useful;         // U, sorted
};

struct GadgetCheck {
  bool ok = false;
  std::string reason;
};

// universe: the part indices Property 2 ranges over (A itself after crown
// merging, all of [k] for freshly built crowns). d: the single-subpath
// coverage bound.
GadgetCheck validate_crown(const Graph& g, const PartPaths& pp,
                           const Crown& crown, const std::vector<int>& universe,
                           int d);

// Local-improvement sweep: reroute each path to a shortest path avoiding the
// other part-paths, repeated to a fixpoint. Endpoints are preserved. The
// result is not guaranteed globally minimal, only subpath-shortest (see
// check_paths_minimal).
PartPaths minimalize_paths(const Graph& g, const PartPaths& initial);

// Fixpoint property: every (u, v) subpath of each p_i is a shortest u-v path
// in G minus the other part-paths. One restricted BFS per path.
bool check_paths_minimal(const Graph& g, const PartPaths& pp);

// Seed-and-grow crowns at contraction-graph vertices of degree >= 3. Seeds
// and growth sites are chosen lowest part index first. Emitted crowns have
// pairwise disjoint part sets and each validates against the full universe.
std::vector<Crown> crowns_high_degree(const Graph& g, const ContractionGraph& r,
                                      const PartPaths& pp);

// Path-window crowns on the contraction graph minus its degree >= 3
// vertices: each surviving path of >= 10 parts yields part triples whose
// connecting walk, after subwalk replacement through the middle part-path,
// forms a crown. pp must be minimal (check_paths_minimal). d: hop diameter.
std::vector<Crown> crowns_low_degree(const Graph& g, const ContractionGraph& r,
                                     const PartPaths& pp, int d);

// Joins disjoint crowns into one, repeatedly connecting the two crowns at
// minimum G-distance by a shortest path whose interior avoids all crowned
// part-paths; a connection endpoint landing on a useful part sacrifices it.
// The output's Property 2 universe shrinks to its own part set.
Crown merge_crowns(const Graph& g, const PartPaths& pp,
                   std::vector<Crown> crowns);

struct CrownResult {
  Crown crown;
  PartPaths paths;            // minimalized part-paths the crown refers to
  std::vector<int> universe;  // Property 2 universe for the crown
  int diameter = 0;
};

// Full construction: minimalize, build R, pick the degree case by the
// |Gamma+(H)| >= k/10 threshold (both cases run near the threshold, larger
// total |A| kept), merge. Throws GadgetError on k < 9 or when no crown with
// |U| >= ceil(k/280) comes out ("construction shortfall").
CrownResult crown_from_pairs(const Graph& g, const PartPaths& initial,
                             int diameter_hint = -1);

/// Connected edge set T holding both endpoints of every path, meeting each
/// path inside at most three subpaths of length <= D.
struct RelaxedGadget {
  std::vector<Walk> paths;
  std::vector<int> pair_ids;  // originating part index per path
  std::vector<EdgeId> tree_edges;
};

struct RelaxedCheck {
  bool ok = false;
  std::string reason;
  // smallest per-subpath length bound for which a <= 3 subpath cover of
  // every V(T) intersection exists (0 when T only touches isolated nodes)
  int coverage_d = 0;
};

// Attaches endpoint walks from every useful part to T, keeps an independent
// set of the walk-interference digraph (greedy minimum degree, >= |U|/5),
// sacrifices the rest, and splices each kept path with its walks. Throws
// GadgetError("construction shortfall ...") if the independent set falls
// short.
RelaxedGadget crown_to_relaxed(const Graph& g, const Crown& crown,
                               const PartPaths& pp);

RelaxedCheck validate_relaxed(const Graph& g, const RelaxedGadget& rg, int d);

/// Paths of hop length >= 3, a tree meeting each path exactly at its two
/// endpoints, and a moving cut with capacity < |paths| whose endpoint
/// distance is beta.
struct StrictGadget {
  std::vector<Walk> paths;
  std::vector<int> pair_ids;
  std::vector<EdgeId> tree_edges;
  MovingCut cut;
  std::int64_t beta = 0;      // min cross ell-distance of the kept pairs
  std::int64_t capacity = 0;
};

// Turns a relaxed gadget plus a moving cut (capacity gamma, endpoint
// distance beta, with beta >= 9d for d the gadget's coverage bound) into a
// strict gadget: scale the cut down until gamma < |pairs|/30001, keep the
// all-unit-length paths, trim the <= 3 T-covered subpaths off each and
// retain a complement piece of ell-length >= (beta'-3d)/2 (hops >= 3),
// absorb trimmings into T, span, then greedily drop pairs until all cross
// ell-distances reach beta'/(4 ceil(log2 k)). Throws GadgetError on
// "hypothesis violated" (beta < 9d) or "construction shortfall".
StrictGadget strictify(const Graph& g, const RelaxedGadget& rg,
                       const MovingCut& mc, std::int64_t beta, int d);

GadgetCheck validate_strict(const Graph& g, const StrictGadget& sg);

struct PipelineResult {
  bool diameter_regime = false;
  std::string note;
  StrictGadget gadget;       // meaningful only when !diameter_regime
  std::int64_t beta_in = 0;  // searched cut's distance
  int d_used = 0;            // effective coverage bound fed to strictify
};

// End-to-end: crown -> relaxed -> lp cut search on the relaxed endpoints ->
// strictify, with the diameter-regime early exit when the searched beta
// stays below 9 times the effective coverage bound (the smaller of the hop
// diameter and the relaxed gadget's measured coverage_d).
PipelineResult gadget_pipeline(const Graph& g, const PartPaths& paths);

// JSON certificate {paths, tree_edges, lengths, beta, capacity};
// lengths lists only edges with ell > 1.
void write_gadget_certificate(const std::string& path, const Graph& g,
                              const StrictGadget& sg);
StrictGadget read_gadget_certificate(const std::string& path, const Graph& g);

}  // namespace shortcutlab
