#include "shortcutlab/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace shortcutlab {

using nlohmann::json;

LoadedGraph read_graph_text(std::istream& in) {
  int n, m;
  if (!(in >> n >> m)) throw GraphError("bad graph header: expected 'n m'");
  LoadedGraph out;
  std::vector<std::pair<int, int>> edges;
  edges.reserve(m);
  out.weights.reserve(m);
  std::string line;
  std::getline(in, line);
  int seen = 0;
  while (seen < m && std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int u, v;
    if (!(ls >> u >> v)) throw GraphError("bad edge line: " + line);
    std::int64_t w;
    if (ls >> w) {
      out.weighted = true;
      out.weights.push_back(w);
    } else {
      out.weights.push_back(1);
    }
    edges.emplace_back(u, v);
    ++seen;
  }
  if (seen != m) throw GraphError("edge count mismatch in graph file");
  // weights must be reordered to follow the canonical EdgeId order
  Graph g = Graph::from_edges(n, edges);
  if (out.weighted) {
    std::vector<std::int64_t> by_eid(g.m(), 1);
    for (int i = 0; i < m; ++i) {
      auto [u, v] = edges[i];
      by_eid[*g.edge_id(u, v)] = out.weights[i];
    }
    out.weights = std::move(by_eid);
  } else {
    out.weights.assign(g.m(), 1);
  }
  out.graph = std::move(g);
  return out;
}

LoadedGraph read_graph_json(std::istream& in) {
  json j = json::parse(in);
  int n = j.at("n").get<int>();
  LoadedGraph out;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::int64_t> w;
  for (auto& e : j.at("edges")) {
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    if (e.size() >= 3) {
      out.weighted = true;
      w.push_back(e[2].get<std::int64_t>());
    } else {
      w.push_back(1);
    }
  }
  Graph g = Graph::from_edges(n, edges);
  std::vector<std::int64_t> by_eid(g.m(), 1);
  for (std::size_t i = 0; i < edges.size(); ++i)
    by_eid[*g.edge_id(edges[i].first, edges[i].second)] = w[i];
  out.weights = std::move(by_eid);
  out.graph = std::move(g);
  return out;
}

LoadedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open graph file: " + path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return read_graph_json(in);
  return read_graph_text(in);
}

void write_graph_text(std::ostream& out, const Graph& g,
                      const std::vector<std::int64_t>* weights) {
  out << g.n() << ' ' << g.m() << '\n';
  for (EdgeId e = 0; e < g.m(); ++e) {
    auto [u, v] = g.edge(e);
    out << u << ' ' << v;
    if (weights) out << ' ' << (*weights)[e];
    out << '\n';
  }
}

void write_graph_json(std::ostream& out, const Graph& g,
                      const std::vector<std::int64_t>* weights) {
  json j;
  j["n"] = g.n();
  j["edges"] = json::array();
  for (EdgeId e = 0; e < g.m(); ++e) {
    auto [u, v] = g.edge(e);
    if (weights)
      j["edges"].push_back({u, v, (*weights)[e]});
    else
      j["edges"].push_back({u, v});
  }
  out << j.dump(2) << '\n';
}

std::vector<std::vector<NodeId>> read_partition(std::istream& in, int n) {
  std::vector<std::vector<NodeId>> parts;
  std::string line;
  std::vector<char> seen(n, 0);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int p, v;
    if (!(ls >> p >> v)) throw GraphError("bad partition line: " + line);
    if (p < 0 || v < 0 || v >= n)
      throw GraphError("partition entry out of range: " + line);
    if (seen[v]) throw GraphError("node assigned twice in partition");
    seen[v] = 1;
    if (static_cast<int>(parts.size()) <= p) parts.resize(p + 1);
    parts[p].push_back(v);
  }
  for (auto& p : parts)
    if (p.empty()) throw GraphError("partition has an empty part index");
  return parts;
}

void write_partition(std::ostream& out,
                     const std::vector<std::vector<NodeId>>& parts) {
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (NodeId v : parts[i]) out << i << ' ' << v << '\n';
}

PairSet read_pairs(std::istream& in) {
  PairSet ps;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int s, t;
    if (!(ls >> s >> t)) throw GraphError("bad pair line: " + line);
    ps.pairs.emplace_back(s, t);
  }
  return ps;
}

void write_pairs(std::ostream& out, const PairSet& ps) {
  for (auto& [s, t] : ps.pairs) out << s << ' ' << t << '\n';
}

PartPaths read_part_paths(std::istream& in) {
  PartPaths pp;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int p, v;
    if (!(ls >> p >> v)) throw GraphError("bad part-path line: " + line);
    if (static_cast<int>(pp.paths.size()) <= p) pp.paths.resize(p + 1);
    pp.paths[p].nodes.push_back(v);
  }
  return pp;
}

void write_part_paths(std::ostream& out, const PartPaths& pp) {
  for (int i = 0; i < pp.k(); ++i)
    for (NodeId v : pp.paths[i].nodes) out << i << ' ' << v << '\n';
}

std::vector<std::vector<EdgeId>> read_shortcut(std::istream& in,
                                               const Graph& g) {
  std::vector<std::vector<EdgeId>> per_part;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int p, u, v;
    if (!(ls >> p >> u >> v)) throw GraphError("bad shortcut line: " + line);
    auto e = g.edge_id(u, v);
    if (!e) throw GraphError("shortcut edge not in graph: " + line);
    if (static_cast<int>(per_part.size()) <= p) per_part.resize(p + 1);
    per_part[p].push_back(*e);
  }
  return per_part;
}

void write_shortcut(std::ostream& out, const Graph& g,
                    const std::vector<std::vector<EdgeId>>& per_part) {
  for (std::size_t i = 0; i < per_part.size(); ++i)
    for (EdgeId e : per_part[i]) {
      auto [u, v] = g.edge(e);
      out << i << ' ' << u << ' ' << v << '\n';
    }
}

std::vector<int> read_cut(std::istream& in, const Graph& g) {
  std::vector<int> ell(g.m(), 1);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int u, v, l;
    if (!(ls >> u >> v >> l)) throw GraphError("bad cut line: " + line);
    auto e = g.edge_id(u, v);
    if (!e) throw GraphError("cut edge not in graph: " + line);
    if (l < 1) throw GraphError("cut length must be >= 1: " + line);
    ell[*e] = l;
  }
  return ell;
}

void write_cut(std::ostream& out, const Graph& g, const std::vector<int>& ell) {
  for (EdgeId e = 0; e < g.m(); ++e)
    if (ell[e] > 1) {
      auto [u, v] = g.edge(e);
      out << u << ' ' << v << ' ' << ell[e] << '\n';
    }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GraphError("cannot write file: " + path);
  out << content;
}

}  // namespace shortcutlab
