#include "shortcutlab/gadget.hpp"

#include <cstdio>
#include <numeric>
#include <queue>
#include <set>

#include "doctest.h"
#include "shortcutlab/instances.hpp"
#include "shortcutlab/moving_cut.hpp"

using namespace shortcutlab;

namespace {

// A long path graph split into k consecutive part-paths of plen nodes each;
// the contraction graph is a path on k vertices.
struct ChainInstance {
  Graph g;
  PartPaths pp;
};

ChainInstance chain_instance(int k, int plen) {
  int n = k * plen;
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  ChainInstance ci{Graph::from_edges(n, std::move(edges)), {}};
  ci.pp.paths.resize(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < plen; ++j) ci.pp.paths[i].nodes.push_back(i * plen + j);
  return ci;
}

ChainInstance ring_instance(int k, int plen) {
  ChainInstance ci{gen_cycle(k * plen), {}};
  ci.pp.paths.resize(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < plen; ++j) ci.pp.paths[i].nodes.push_back(i * plen + j);
  return ci;
}

// Independent oracle for contraction edges: parts are linked iff they touch
// directly or share an adjacent component of part-free nodes.
std::set<std::pair<int, int>> oracle_contraction(const Graph& g,
                                                 const PartPaths& pp) {
  auto part = pp.part_of(g);
  int n = g.n();
  std::vector<int> comp(n, -1);
  int nc = 0;
  for (int v = 0; v < n; ++v) {
    if (part[v] >= 0 || comp[v] >= 0) continue;
    std::queue<int> q;
    q.push(v);
    comp[v] = nc;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int w : g.neighbors(x))
        if (part[w] < 0 && comp[w] < 0) {
          comp[w] = nc;
          q.push(w);
        }
    }
    ++nc;
  }
  std::set<std::pair<int, int>> out;
  std::vector<std::set<int>> touch(nc);
  for (auto [u, v] : g.edges()) {
    if (part[u] >= 0 && part[v] >= 0 && part[u] != part[v])
      out.insert({std::min(part[u], part[v]), std::max(part[u], part[v])});
    if (part[u] < 0 && part[v] >= 0) touch[comp[u]].insert(part[v]);
    if (part[v] < 0 && part[u] >= 0) touch[comp[v]].insert(part[u]);
  }
  for (const auto& t : touch)
    for (auto i = t.begin(); i != t.end(); ++i)
      for (auto j = std::next(i); j != t.end(); ++j) out.insert({*i, *j});
  return out;
}

std::vector<int> full_universe(int k) {
  std::vector<int> u(k);
  std::iota(u.begin(), u.end(), 0);
  return u;
}

// Figure-style hand instance: two horizontal paths, a star hub joining the
// four endpoints.
struct HandStrict {
  Graph g;
  StrictGadget sg;
};

HandStrict hand_strict(int plen) {
  std::vector<std::pair<int, int>> edges;
  for (int j = 0; j + 1 <= plen; ++j) {
    edges.emplace_back(j, j + 1);
    edges.emplace_back(plen + 1 + j, plen + 2 + j);
  }
  int hub = 2 * plen + 2;
  edges.emplace_back(0, hub);
  edges.emplace_back(plen, hub);
  edges.emplace_back(plen + 1, hub);
  edges.emplace_back(2 * plen + 1, hub);
  HandStrict h{Graph::from_edges(hub + 1, std::move(edges)), {}};
  Walk p1, p2;
  for (int j = 0; j <= plen; ++j) p1.nodes.push_back(j);
  for (int j = 0; j <= plen; ++j) p2.nodes.push_back(plen + 1 + j);
  h.sg.paths = {p1, p2};
  h.sg.pair_ids = {0, 1};
  h.sg.tree_edges = {*h.g.edge_id(0, hub), *h.g.edge_id(plen, hub),
                     *h.g.edge_id(plen + 1, hub), *h.g.edge_id(2 * plen + 1, hub)};
  h.sg.cut = MovingCut::unit(h.g);
  PairSet pairs;
  pairs.pairs = {{0, plen}, {plen + 1, 2 * plen + 1}};
  h.sg.beta = cut_distance(h.g, h.sg.cut, pairs);
  h.sg.capacity = 0;
  return h;
}

}  // namespace

TEST_CASE("contraction graph: two paths joined by one bridge") {
  // p0 = 0-1, p1 = 2-3, bridge edge 1-2
  auto g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  PartPaths pp;
  pp.paths = {{{0, 1}}, {{2, 3}}};
  auto r = build_contraction_graph(g, pp);
  REQUIRE(r.edges.size() == 1);
  CHECK(r.edges[0] == std::pair<int, int>{0, 1});
  const Walk& w = r.witness_for(0, 1);
  CHECK(w.nodes.front() == 1);
  CHECK(w.nodes.back() == 2);
  CHECK(w.length() == 1);
}

TEST_CASE("contraction graph: common free hub makes R complete") {
  // three 2-node paths, all middle-attached to hub 6
  auto g = Graph::from_edges(
      7, {{0, 1}, {2, 3}, {4, 5}, {0, 6}, {2, 6}, {4, 6}});
  PartPaths pp;
  pp.paths = {{{0, 1}}, {{2, 3}}, {{4, 5}}};
  auto r = build_contraction_graph(g, pp);
  CHECK(r.edges.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(r.degree(i) == 2);
  // witnesses run through the hub with free interior
  auto part = pp.part_of(g);
  for (const auto& w : r.witness) {
    CHECK(w.valid_in(g));
    CHECK(w.simple());
    for (size_t j = 1; j + 1 < w.nodes.size(); ++j)
      CHECK(part[w.nodes[j]] == -1);
  }
}

TEST_CASE("contraction graph matches the free-component oracle") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    auto g = gen_random_connected(10, 0.3, derive_seed(900, seed));
    auto sp = sample_connectable_pairs(g, 3, derive_seed(901, seed));
    if (sp.paths.k() < 2) continue;
    auto r = build_contraction_graph(g, sp.paths);
    std::set<std::pair<int, int>> got(r.edges.begin(), r.edges.end());
    CHECK(got == oracle_contraction(g, sp.paths));
    auto part = sp.paths.part_of(g);
    for (size_t e = 0; e < r.edges.size(); ++e) {
      const Walk& w = r.witness[e];
      CHECK(w.valid_in(g));
      CHECK(w.simple());
      CHECK(part[w.nodes.front()] == r.edges[e].first);
      CHECK(part[w.nodes.back()] == r.edges[e].second);
      for (size_t j = 1; j + 1 < w.nodes.size(); ++j)
        CHECK(part[w.nodes[j]] == -1);
    }
  }
}

TEST_CASE("minimalize_paths removes a detour") {
  auto g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  PartPaths pp;
  pp.paths = {{{0, 1, 2, 3}}};
  auto out = minimalize_paths(g, pp);
  CHECK(out.paths[0].nodes == std::vector<NodeId>{0, 3});
  CHECK(check_paths_minimal(g, out));
}

TEST_CASE("minimalize_paths: already-shortest disjoint paths unchanged") {
  auto ci = chain_instance(5, 4);
  auto out = minimalize_paths(ci.g, ci.pp);
  for (int i = 0; i < 5; ++i) CHECK(out.paths[i].nodes == ci.pp.paths[i].nodes);
  CHECK(check_paths_minimal(ci.g, out));
}

TEST_CASE("minimalize_paths fuzz: fixpoint is subpath-shortest") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto g = gen_random_connected(24, 0.15, derive_seed(910, seed));
    auto sp = sample_connectable_pairs(g, 4, derive_seed(911, seed));
    if (sp.paths.k() < 2) continue;
    auto out = minimalize_paths(g, sp.paths);
    out.validate(g);
    for (int i = 0; i < out.k(); ++i) {
      CHECK(out.paths[i].first() == sp.paths.paths[i].first());
      CHECK(out.paths[i].last() == sp.paths.paths[i].last());
      CHECK(out.paths[i].length() <= sp.paths.paths[i].length());
    }
    CHECK(check_paths_minimal(g, out));
  }
}

TEST_CASE("high-degree crowns: star contraction graph K_{1,3}") {
  // parts 0..3 of 3 nodes each, hubs joining part 0 to each other part
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 4; ++i) {
    edges.emplace_back(3 * i, 3 * i + 1);
    edges.emplace_back(3 * i + 1, 3 * i + 2);
  }
  for (int i = 1; i < 4; ++i) {
    edges.emplace_back(1, 12 + i - 1);          // p0 middle to hub
    edges.emplace_back(12 + i - 1, 3 * i + 1);  // hub to p_i middle
  }
  auto g = Graph::from_edges(15, std::move(edges));
  PartPaths pp;
  pp.paths.resize(4);
  for (int i = 0; i < 4; ++i)
    pp.paths[i].nodes = {3 * i, 3 * i + 1, 3 * i + 2};
  auto r = build_contraction_graph(g, pp);
  REQUIRE(r.degree(0) == 3);
  auto crowns = crowns_high_degree(g, r, pp);
  REQUIRE(crowns.size() == 1);
  CHECK(crowns[0].parts == std::vector<int>{0, 1, 2, 3});
  CHECK(crowns[0].useful == std::vector<int>{1, 2, 3});  // seed sacrificed
  auto chk = validate_crown(g, pp, crowns[0], full_universe(4), diameter(g));
  CHECK(chk.ok);
  INFO(chk.reason);
}

TEST_CASE("high-degree crowns: a path contraction graph yields none") {
  auto ci = chain_instance(8, 3);
  auto r = build_contraction_graph(ci.g, ci.pp);
  CHECK(crowns_high_degree(ci.g, r, ci.pp).empty());
}

TEST_CASE("high-degree crowns fuzz: valid, disjoint, charging holds") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto g = gen_random_connected(60, 0.08, derive_seed(920, seed));
    auto sp = sample_connectable_pairs(g, 12, derive_seed(921, seed));
    if (sp.paths.k() < 4) continue;
    auto pp = minimalize_paths(g, sp.paths);
    auto r = build_contraction_graph(g, pp);
    auto crowns = crowns_high_degree(g, r, pp);
    int d = diameter(g);
    std::vector<int> in_a(r.k, 0), is_useful(r.k, 0);
    for (const auto& c : crowns) {
      auto chk = validate_crown(g, pp, c, full_universe(r.k), d);
      CHECK(chk.ok);
      INFO(chk.reason);
      for (int a : c.parts) {
        CHECK(!in_a[a]);  // crowns pairwise disjoint
        in_a[a] = 1;
      }
      for (int u : c.useful) is_useful[u] = 1;
    }
    // charging precondition: unused high-degree parts have a crowned useful
    // neighbor
    for (int v = 0; v < r.k; ++v) {
      if (in_a[v] || r.degree(v) < 3) continue;
      bool ok = false;
      for (int w : r.adj[v]) ok = ok || is_useful[w];
      CHECK(ok);
    }
  }
}

TEST_CASE("low-degree window index x = 3*ceil(l/9) - 1") {
  auto x = [](int l) { return 3 * ((l + 8) / 9) - 1; };
  CHECK(2 * x(9) == 4);
  CHECK(2 * x(10) == 10);
  CHECK(2 * x(11) == 10);
  for (int l = 10; l <= 40; ++l) CHECK(2 * x(l) <= l);  // both indices valid
}

TEST_CASE("low-degree crowns on a chain of parts") {
  auto ci = chain_instance(30, 3);
  REQUIRE(check_paths_minimal(ci.g, ci.pp));
  auto r = build_contraction_graph(ci.g, ci.pp);
  for (int v = 0; v < 30; ++v) CHECK(r.degree(v) <= 2);
  int d = ci.g.n() - 1;
  auto crowns = crowns_low_degree(ci.g, r, ci.pp, d);
  REQUIRE(crowns.size() >= 3);
  size_t total_a = 0;
  std::set<int> seen;
  for (const auto& c : crowns) {
    CHECK(c.parts.size() == 3);
    CHECK(c.useful == c.parts);
    auto chk = validate_crown(ci.g, ci.pp, c, full_universe(30), d);
    CHECK(chk.ok);
    INFO(chk.reason);
    for (int a : c.parts) CHECK(seen.insert(a).second);
    total_a += c.parts.size();
  }
  CHECK(total_a * 100 >= 3 * 30);  // sum |A_i| >= 3k/100
}

TEST_CASE("low-degree crowns: ring of parts hits the cycle special case") {
  auto ci = ring_instance(31, 3);
  REQUIRE(check_paths_minimal(ci.g, ci.pp));
  auto r = build_contraction_graph(ci.g, ci.pp);
  for (int v = 0; v < 31; ++v) CHECK(r.degree(v) == 2);
  int d = diameter(ci.g);
  auto crowns = crowns_low_degree(ci.g, r, ci.pp, d);
  CHECK(crowns.size() >= 3);
  for (const auto& c : crowns) {
    CHECK(validate_crown(ci.g, ci.pp, c, full_universe(31), d).ok);
    for (int a : c.parts) CHECK(a != 0);  // the dropped cycle vertex
  }
}

TEST_CASE("low-degree crowns: k <= 2 is trivially empty") {
  auto ci = chain_instance(2, 4);
  auto r = build_contraction_graph(ci.g, ci.pp);
  CHECK(crowns_low_degree(ci.g, r, ci.pp, ci.g.n()).empty());
}

TEST_CASE("merge_crowns: single crown returned unchanged") {
  auto ci = chain_instance(30, 3);
  auto r = build_contraction_graph(ci.g, ci.pp);
  auto crowns = crowns_low_degree(ci.g, r, ci.pp, ci.g.n() - 1);
  REQUIRE(!crowns.empty());
  auto one = merge_crowns(ci.g, ci.pp, {crowns[0]});
  CHECK(one.parts == crowns[0].parts);
  CHECK(one.useful == crowns[0].useful);
  CHECK(one.tree_edges == crowns[0].tree_edges);
}

TEST_CASE("merge_crowns joins chain crowns into one valid crown") {
  auto ci = chain_instance(30, 3);
  auto r = build_contraction_graph(ci.g, ci.pp);
  auto crowns = crowns_low_degree(ci.g, r, ci.pp, ci.g.n() - 1);
  REQUIRE(crowns.size() >= 3);
  size_t sum_a = 0, sum_u = 0;
  for (const auto& c : crowns) {
    sum_a += c.parts.size();
    sum_u += c.useful.size();
  }
  auto merged = merge_crowns(ci.g, ci.pp, crowns);
  CHECK(merged.parts.size() == sum_a);  // A_* is the disjoint union
  CHECK(merged.useful.size() >= sum_u - 2 * (crowns.size() - 1));
  auto chk = validate_crown(ci.g, ci.pp, merged, merged.parts, ci.g.n() - 1);
  CHECK(chk.ok);
  INFO(chk.reason);
}

TEST_CASE("merge_crowns rejects overlapping part sets") {
  auto ci = chain_instance(30, 3);
  auto r = build_contraction_graph(ci.g, ci.pp);
  auto crowns = crowns_low_degree(ci.g, r, ci.pp, ci.g.n() - 1);
  REQUIRE(!crowns.empty());
  CHECK_THROWS_AS(merge_crowns(ci.g, ci.pp, {crowns[0], crowns[0]}),
                  GadgetError);
}

TEST_CASE("crown_from_pairs rejects k < 9") {
  auto ci = chain_instance(5, 4);
  CHECK_THROWS_WITH_AS(crown_from_pairs(ci.g, ci.pp),
                       doctest::Contains("at least 9"), GadgetError);
}

TEST_CASE("crown_from_pairs on a chain goes through the low-degree case") {
  auto ci = chain_instance(30, 3);
  auto res = crown_from_pairs(ci.g, ci.pp);
  CHECK(res.crown.useful.size() >= 5);
  CHECK(validate_crown(ci.g, res.paths, res.crown, res.universe, res.diameter)
            .ok);
}

TEST_CASE("crown_from_pairs on the gadget family") {
  auto inst = gen_gadget_family(40, 20);
  auto res = crown_from_pairs(inst.graph, inst.paths);
  CHECK(static_cast<int>(res.crown.useful.size()) >= (40 + 279) / 280);
  auto chk = validate_crown(inst.graph, res.paths, res.crown, res.universe,
                            res.diameter);
  CHECK(chk.ok);
  INFO(chk.reason);
  CHECK(check_paths_minimal(inst.graph, res.paths));
}

TEST_CASE("crown_to_relaxed on the gadget family") {
  auto inst = gen_gadget_family(40, 20);
  auto res = crown_from_pairs(inst.graph, inst.paths);
  auto rg = crown_to_relaxed(inst.graph, res.crown, res.paths);
  CHECK(5 * rg.paths.size() >= res.crown.useful.size());
  auto chk = validate_relaxed(inst.graph, rg, res.diameter);
  CHECK(chk.ok);
  INFO(chk.reason);
  CHECK(chk.coverage_d <= res.diameter);
  // every kept path keeps its original endpoints
  for (size_t i = 0; i < rg.paths.size(); ++i) {
    int id = rg.pair_ids[i];
    CHECK(rg.paths[i].first() == res.paths.paths[id].first());
    CHECK(rg.paths[i].last() == res.paths.paths[id].last());
  }
}

TEST_CASE("crown_to_relaxed on the chain crown") {
  auto ci = chain_instance(30, 3);
  auto res = crown_from_pairs(ci.g, ci.pp);
  auto rg = crown_to_relaxed(ci.g, res.crown, res.paths);
  auto chk = validate_relaxed(ci.g, rg, res.diameter);
  CHECK(chk.ok);
  INFO(chk.reason);
}

TEST_CASE("validate_strict: hand-built gadget passes, mutations fail") {
  auto h = hand_strict(10);
  CHECK(h.sg.beta == 2);  // endpoints two hops apart through the hub
  auto chk = validate_strict(h.g, h.sg);
  CHECK(chk.ok);
  INFO(chk.reason);

  auto broken = h.sg;
  broken.tree_edges.pop_back();
  CHECK(!validate_strict(h.g, broken).ok);

  auto heavy = h.sg;
  heavy.cut.ell[0] = 1000;
  heavy.capacity = cut_capacity(heavy.cut);
  auto hc = validate_strict(h.g, heavy);
  CHECK(!hc.ok);
  CHECK(hc.reason == "capacity >= |P|");

  auto shortp = h.sg;
  shortp.paths[0].nodes.resize(3);  // 2 hops
  CHECK(!validate_strict(h.g, shortp).ok);
}

TEST_CASE("strictify on the hand relaxed gadget (coverage d = 0)") {
  auto h = hand_strict(10);
  RelaxedGadget rg;
  rg.paths = h.sg.paths;
  rg.pair_ids = {0, 1};
  rg.tree_edges = h.sg.tree_edges;
  auto rc = validate_relaxed(h.g, rg, diameter(h.g));
  REQUIRE(rc.ok);
  CHECK(rc.coverage_d == 0);  // T touches only the endpoints
  auto mc = MovingCut::unit(h.g);
  auto sg = strictify(h.g, rg, mc, 2, 0);
  auto chk = validate_strict(h.g, sg);
  CHECK(chk.ok);
  INFO(chk.reason);
  CHECK(sg.beta == 2);
  CHECK(sg.paths.size() == 2);
  CHECK(sg.capacity == 0);
}

TEST_CASE("strictify refuses beta < 9d") {
  auto h = hand_strict(10);
  RelaxedGadget rg;
  rg.paths = h.sg.paths;
  rg.pair_ids = {0, 1};
  rg.tree_edges = h.sg.tree_edges;
  CHECK_THROWS_WITH_AS(strictify(h.g, rg, MovingCut::unit(h.g), 8, 1),
                       doctest::Contains("hypothesis violated"), GadgetError);
}

TEST_CASE("strictify with an lp cut on the gadget family") {
  auto inst = gen_gadget_family(40, 20);
  auto res = crown_from_pairs(inst.graph, inst.paths);
  auto rg = crown_to_relaxed(inst.graph, res.crown, res.paths);
  auto rc = validate_relaxed(inst.graph, rg, res.diameter);
  REQUIRE(rc.ok);
  PairSet pairs;
  for (const auto& p : rg.paths) pairs.pairs.emplace_back(p.first(), p.last());
  auto cut = search_cut_lp(inst.graph, pairs);
  int deff = std::min(res.diameter, rc.coverage_d);
  REQUIRE(cut.beta >= 9 * deff);
  auto sg = strictify(inst.graph, rg, cut.cut, cut.beta, deff);
  auto chk = validate_strict(inst.graph, sg);
  CHECK(chk.ok);
  INFO(chk.reason);
  CHECK(sg.beta >= 1);
  CHECK(sg.beta <= cut.beta);  // monotone against the searched cut
  for (const auto& p : sg.paths) CHECK(p.length() >= 3);
}

TEST_CASE("pipeline: single pair on a cycle lands in the diameter regime") {
  auto g = gen_cycle(40);
  PartPaths pp;
  pp.paths.resize(1);
  for (int v = 0; v <= 20; ++v) pp.paths[0].nodes.push_back(v);
  auto res = gadget_pipeline(g, pp);
  CHECK(res.diameter_regime);
  CHECK(res.beta_in == 20);
}

TEST_CASE("pipeline: gadget family produces a validated strict gadget") {
  auto inst = gen_gadget_family(40, 20);
  auto res = gadget_pipeline(inst.graph, inst.paths);
  REQUIRE(!res.diameter_regime);
  CHECK(res.gadget.beta >= 1);
  CHECK(res.gadget.beta <= res.beta_in);
  CHECK(validate_strict(inst.graph, res.gadget).ok);
}

TEST_CASE("certificate round-trips through the validator") {
  auto h = hand_strict(10);
  std::string path = "hand_gadget_cert.json";
  write_gadget_certificate(path, h.g, h.sg);
  auto back = read_gadget_certificate(path, h.g);
  std::remove(path.c_str());
  CHECK(back.beta == h.sg.beta);
  CHECK(back.capacity == h.sg.capacity);
  CHECK(back.cut.ell == h.sg.cut.ell);
  std::set<EdgeId> a(back.tree_edges.begin(), back.tree_edges.end());
  std::set<EdgeId> b(h.sg.tree_edges.begin(), h.sg.tree_edges.end());
  CHECK(a == b);
  CHECK(validate_strict(h.g, back).ok);
}
