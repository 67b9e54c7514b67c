#include "shortcutlab/graph.hpp"

#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "shortcutlab/instances.hpp"
#include "shortcutlab/io.hpp"

using namespace shortcutlab;

TEST_CASE("graph construction validates") {
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 1}}), GraphError);  // disconnected
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 0}}), GraphError);
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 1}, {1, 0}}), GraphError);
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 2}}), GraphError);
  auto g = Graph::from_edges(3, {{1, 2}, {0, 1}});
  CHECK(g.m() == 2);
  CHECK(g.edge(0) == std::pair<int, int>{0, 1});
  CHECK(g.has_edge(2, 1));
  CHECK(!g.has_edge(0, 2));
  // disconnected diagnostic carries component sizes
  try {
    Graph::from_edges(5, {{0, 1}, {2, 3}, {3, 4}});
    CHECK(false);
  } catch (const GraphError& e) {
    CHECK(std::string(e.what()).find("2 components") != std::string::npos);
  }
}

TEST_CASE("bfs and diameter agree with all-pairs oracle") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    auto g = gen_random_connected(24, 0.12, seed);
    auto d = oracle::all_pairs_hops(g);
    auto b0 = bfs_distances(g, 0);
    for (int v = 0; v < g.n(); ++v) CHECK(b0[v] == d[0][v]);
    CHECK(diameter(g) == oracle::diameter(g));
  }
  CHECK(diameter(gen_cycle(9)) == 4);
  CHECK(diameter(gen_grid(4, 7)) == 9);
}

TEST_CASE("iFUB path matches small-graph diameter on large instances") {
  auto g = gen_grid(40, 20);  // 800 nodes, exercises the iFUB branch
  CHECK(diameter(g) == 58);
  auto t = gen_random_tree(700, 9);
  int brute = 0;
  for (int v = 0; v < t.n(); ++v) brute = std::max(brute, eccentricity(t, v));
  CHECK(diameter(t) == brute);
}

TEST_CASE("ell distances match relaxation oracle") {
  for (std::uint64_t seed : {5ull, 6ull}) {
    auto g = gen_random_connected(18, 0.15, seed);
    std::mt19937_64 rng(seed);
    std::vector<int> len(g.m());
    for (auto& l : len) l = 1 + static_cast<int>(rng() % 5);
    auto got = ell_distances(g, len, {0, 3});
    auto want = oracle::ell_dists(g, len, {0, 3});
    for (int v = 0; v < g.n(); ++v) CHECK(got[v] == want[v]);
  }
  auto g = gen_cycle(6);
  std::vector<int> len(g.m(), 1);
  len[*g.edge_id(0, 1)] = 10;
  CHECK(ell_distance(g, len, {0}, {1}) == 5);
  std::vector<int> bad(g.m(), 0);
  CHECK_THROWS_AS(ell_distance(g, bad, {0}, {1}), GraphError);
}

TEST_CASE("clip and project") {
  auto g = gen_cycle(8);
  Walk w{{0, 1, 2, 3, 4, 5, 6}};
  auto c = clip_walk(w, {1, 3}, {5, 6}, g.n());
  CHECK(c.nodes == std::vector<int>{3, 4, 5});
  CHECK_THROWS_WITH_AS(clip_walk(w, {6}, {1}, g.n()),
                       "clip undefined: no B-visit after the last A-visit",
                       GraphError);
  std::vector<int> owner(8, -1);
  owner[1] = owner[2] = 0;
  owner[4] = 2;
  CHECK(project_walk(w, owner) == std::vector<int>{0, 2});
  Walk loopy{{0, 1, 2, 1, 0, 7}};
  CHECK(loopy.simplified().nodes == std::vector<int>{0, 7});
  CHECK(loopy.simplified().simple());
}

TEST_CASE("heavy light: star and caterpillar") {
  // star rooted at center: one light child (lowest id on ties), others heavy
  std::vector<std::vector<int>> star{{1, 2, 3}, {0}, {0}, {0}};
  auto h = heavy_light(star, 0);
  CHECK(h.subtree_size[0] == 4);
  CHECK(h.light_to_parent[1]);
  CHECK(!h.light_to_parent[2]);
  CHECK(!h.light_to_parent[3]);
  // light paths partition the nodes
  std::size_t covered = 0;
  for (auto& p : h.light_paths) covered += p.nodes.size();
  CHECK(covered == 4);

  // a path decomposes into a single light path
  std::vector<std::vector<int>> path{{1}, {0, 2}, {1, 3}, {2}};
  auto hp = heavy_light(path, 0);
  CHECK(hp.light_paths.size() == 1);
  CHECK(hp.light_paths[0].nodes == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("heavy light: log bound on heavy edges, random trees") {
  for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
    auto t = gen_random_tree(200, seed);
    std::vector<std::vector<int>> adj(t.n());
    for (auto& [u, v] : t.edges()) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    auto h = heavy_light(adj, 0);
    int bound = static_cast<int>(std::ceil(std::log2(t.n())));
    // count heavy edges on each root-to-leaf path
    for (int v = 0; v < t.n(); ++v) {
      int heavy = 0;
      for (int x = v; h.parent[x] != -1; x = h.parent[x])
        if (!h.light_to_parent[x]) ++heavy;
      CHECK(heavy <= bound);
    }
    // light paths are vertex-disjoint and cover all nodes
    std::vector<int> owner(t.n(), -1);
    for (std::size_t i = 0; i < h.light_paths.size(); ++i)
      for (int v : h.light_paths[i].nodes) {
        CHECK(owner[v] == -1);
        owner[v] = static_cast<int>(i);
      }
    for (int v = 0; v < t.n(); ++v) CHECK(owner[v] != -1);
  }
  CHECK_THROWS_AS(heavy_light({{1}, {0}, {}}, 0), GraphError);
}

TEST_CASE("biconnected components against articulation oracle") {
  // two triangles joined at node 2 plus a pendant
  auto g = Graph::from_edges(
      6, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}, {4, 5}});
  auto r = biconnected(g);
  CHECK(r.components.size() == 3);
  CHECK(r.d_bcc == 1);
  for (std::uint64_t seed : {21ull, 22ull, 23ull}) {
    auto h = gen_random_connected(16, 0.14, seed);
    auto comps = biconnected(h);
    // every node in >= 2 components is an articulation point and vice versa
    std::map<int, int> count;
    for (auto& comp : comps.components)
      for (int v : comp) ++count[v];
    auto arts = oracle::articulation_points(h);
    for (int v = 0; v < h.n(); ++v)
      CHECK((count[v] >= 2) == (arts.count(v) > 0));
  }
}

TEST_CASE("graph file formats round-trip") {
  auto g = gen_grid(3, 3);
  std::ostringstream txt;
  write_graph_text(txt, g);
  std::istringstream back(txt.str());
  auto lg = read_graph_text(back);
  CHECK(lg.graph.n() == 9);
  CHECK(lg.graph.edges() == g.edges());
  CHECK(!lg.weighted);

  std::ostringstream js;
  std::vector<std::int64_t> w(g.m());
  for (int e = 0; e < g.m(); ++e) w[e] = 10 + e;
  write_graph_json(js, g, &w);
  std::istringstream jback(js.str());
  auto jg = read_graph_json(jback);
  CHECK(jg.graph.edges() == g.edges());
  CHECK(jg.weighted);
  CHECK(jg.weights == w);
}
