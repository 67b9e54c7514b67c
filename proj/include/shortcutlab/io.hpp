#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "shortcutlab/graph.hpp"

namespace shortcutlab {

// Text graph format: header "n m", then one "u v" (or "u v w") line per
// edge. Weights are optional and returned separately when present.
struct LoadedGraph {
  Graph graph;
  bool weighted = false;
  std::vector<std::int64_t> weights;  // per EdgeId when weighted
};

LoadedGraph read_graph_text(std::istream& in);
LoadedGraph load_graph(const std::string& path);  // .json goes via the mirror
void write_graph_text(std::ostream& out, const Graph& g,
                      const std::vector<std::int64_t>* weights = nullptr);
void write_graph_json(std::ostream& out, const Graph& g,
                      const std::vector<std::int64_t>* weights = nullptr);
LoadedGraph read_graph_json(std::istream& in);

// Partition file: one "part_index node_id" line per node.
std::vector<std::vector<NodeId>> read_partition(std::istream& in, int n);
void write_partition(std::ostream& out,
                     const std::vector<std::vector<NodeId>>& parts);

// Pair file: one "s t" line per pair.
PairSet read_pairs(std::istream& in);
void write_pairs(std::ostream& out, const PairSet& ps);

// Part-path file: "part_index node_id" lines in path order.
PartPaths read_part_paths(std::istream& in);
void write_part_paths(std::ostream& out, const PartPaths& pp);

// Shortcut file: one "part_index u v" line per shortcut edge.
std::vector<std::vector<EdgeId>> read_shortcut(std::istream& in, const Graph& g);
void write_shortcut(std::ostream& out, const Graph& g,
                    const std::vector<std::vector<EdgeId>>& per_part);

// Cut file: one "u v ell" line per edge with ell > 1 (unit lengths implied).
std::vector<int> read_cut(std::istream& in, const Graph& g);
void write_cut(std::ostream& out, const Graph& g, const std::vector<int>& ell);

std::string slurp(const std::string& path);
void spill(const std::string& path, const std::string& content);

}  // namespace shortcutlab
