#include "shortcutlab/moving_cut.hpp"

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "shortcutlab/instances.hpp"

using namespace shortcutlab;

TEST_CASE("capacity, distance, validate") {
  auto g = gen_cycle(6);
  MovingCut mc = MovingCut::unit(g);
  CHECK(cut_capacity(mc) == 0);
  PairSet ps;
  ps.pairs = {{0, 3}};
  CHECK(cut_distance(g, mc, ps) == 3);
  CHECK(validate_cut(g, mc, ps).ok);

  mc.ell[*g.edge_id(0, 1)] = 4;
  CHECK(cut_capacity(mc) == 3);
  // set-to-set semantics: both arcs count, distance is the cheaper route
  CHECK(cut_distance(g, mc, ps) == 3);
  auto chk = validate_cut(g, mc, ps);
  CHECK(!chk.ok);  // capacity 3 >= k = 1
  ps.pairs = {{0, 3}, {1, 4}, {2, 5}, {0, 2}};
  CHECK(validate_cut(g, mc, ps).ok);
}

TEST_CASE("scale: exact guarantees on random cuts") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = gen_random_connected(14, 0.18, 1000 + trial);
    MovingCut mc = MovingCut::unit(g);
    for (auto& l : mc.ell) l = 1 + static_cast<int>(rng() % 9);
    PairSet ps;
    ps.pairs = {{0, g.n() - 1}, {1, g.n() - 2}};
    ScaleFactor c = scale_schedule(1 + static_cast<int>(rng() % 6));
    auto scaled = scale_cut(mc, c);
    std::int64_t gamma = cut_capacity(mc), beta = cut_distance(g, mc, ps);
    std::int64_t gs = cut_capacity(scaled), bs = cut_distance(g, scaled, ps);
    // gamma_s <= gamma / c  and  beta_s >= beta / (1 + c), in integers
    CHECK(gs * c.num <= gamma * c.den);
    CHECK(bs * (c.num + c.den) >= beta * c.den);
    for (std::size_t e = 0; e < mc.ell.size(); ++e) CHECK(scaled.ell[e] >= 1);
  }
  CHECK(scale_schedule(0).value() == 1.0);
  CHECK(scale_schedule(1).value() == 1.5);
  CHECK(scale_schedule(2).value() == 2.0);
  CHECK(scale_schedule(3).value() == 3.0);
  CHECK(scale_schedule(4).value() == 4.0);
  CHECK(scale_schedule(5).value() == 6.0);
  CHECK(scale_schedule(6).value() == 8.0);
}

TEST_CASE("exact search: single pair forces unit lengths") {
  // k = 1 leaves zero capacity budget, so the optimum is the hop distance
  auto g = gen_grid(2, 3);
  PairSet ps;
  ps.pairs = {{0, 5}};
  auto res = search_cut_exact(g, ps, 3);
  CHECK(res.beta == 3);
  CHECK(res.capacity == 0);
  CHECK(validate_cut(g, ps.pairs.empty() ? MovingCut::unit(g) : res.cut, ps).ok);
}

TEST_CASE("exact search: cycle with budget lengthens the short arcs") {
  auto g = gen_cycle(8);
  PairSet ps;
  ps.pairs = {{0, 4}, {1, 5}, {2, 6}};  // budget 2
  auto base = cut_distance(g, MovingCut::unit(g), ps);
  CHECK(base == 2);  // e.g. 0 -> 7 -> 6
  auto res = search_cut_exact(g, ps, 3);
  CHECK(res.capacity <= 2);
  // one extra on (7,0) and one on (3,4) lifts every cross route to 3, and
  // budget 2 cannot push both disjoint short arcs to 4
  CHECK(res.beta == 3);
  CHECK(validate_cut(g, res.cut, ps).ok);
}

TEST_CASE("lp search dominates on miniatures and stays valid") {
  for (std::uint64_t seed : {3ull, 4ull, 5ull, 6ull}) {
    auto g = gen_random_connected(8, 0.3, seed);
    if (g.m() > 14) continue;
    PairSet ps;
    ps.pairs = {{0, g.n() - 1}, {1, g.n() - 2}, {2, g.n() - 3}};
    auto ex = search_cut_exact(g, ps, 3);
    auto lp = search_cut_lp(g, ps);
    CHECK(validate_cut(g, lp.cut, ps).ok);
    // master optimum upper bounds MC(S); the exact answer sits in between
    CHECK(lp.fractional_beta >= static_cast<double>(ex.beta) - 1e-6);
    CHECK(ex.beta >= lp.beta);  // exact dominates the rounded lp cut
    CHECK(lp.beta >= 1);
  }
}

TEST_CASE("lp search on the gadget family lengthens the tree bottleneck") {
  auto inst = gen_gadget_family(40, 20);
  auto ps = PairSet::from_part_paths(inst.paths);
  auto res = search_cut_lp(inst.graph, ps);
  CHECK(validate_cut(inst.graph, res.cut, ps).ok);
  // without a cut the tree route caps the distance at O(log k); the lp
  // must push the set-to-set distance toward the path length
  auto base = cut_distance(inst.graph, MovingCut::unit(inst.graph), ps);
  CHECK(base <= 2 * 7);
  CHECK(res.beta >= 18);
  CHECK(res.beta <= 21);
  CHECK(res.fractional_beta >= static_cast<double>(res.beta) - 1e-6);
}

TEST_CASE("mc_of_graph_estimate is at least the diameter bound") {
  auto g = gen_grid(5, 5);
  auto est = mc_of_graph_estimate(g, 7, 2);
  CHECK(est.beta >= 8);
}
