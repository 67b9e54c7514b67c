// Acceptance gate: one line per criterion, nonzero exit iff any fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "shortcutlab/gadget.hpp"
#include "shortcutlab/instances.hpp"
#include "shortcutlab/io.hpp"
#include "shortcutlab/moving_cut.hpp"
#include "shortcutlab/partition.hpp"
#include "shortcutlab/routing.hpp"
#include "shortcutlab/sim.hpp"

using namespace shortcutlab;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int idx, bool ok, const std::string& what,
            const std::string& detail) {
  std::cout << "[" << (idx < 10 ? " " : "") << idx << "/11] "
            << (ok ? "PASS" : "FAIL") << "  " << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++failures;
}

int ceil_log2(int x) {
  int b = 0;
  while ((1 << b) < x) ++b;
  return b;
}

// Connected partition: contract a random spanning forest of G down to a
// target component count, components become the parts.
Partition random_forest_partition(const Graph& g, std::uint64_t seed,
                                  int target) {
  std::vector<int> parent(g.n());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<EdgeId> order(g.m());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  int comps = g.n();
  for (EdgeId e : order) {
    if (comps <= target) break;
    auto [u, v] = g.edge(e);
    if (find(u) != find(v)) {
      parent[find(u)] = find(v);
      --comps;
    }
  }
  std::map<int, std::vector<NodeId>> groups;
  for (NodeId v = 0; v < g.n(); ++v) groups[find(v)].push_back(v);
  Partition p;
  for (auto& [root, nodes] : groups) p.parts.push_back(nodes);
  return p;
}

StrictGadget family_gadget(const Graph& g, const GadgetFamilyInstance& fam) {
  StrictGadget sg;
  sg.paths = fam.paths.paths;
  sg.pair_ids.resize(sg.paths.size());
  std::iota(sg.pair_ids.begin(), sg.pair_ids.end(), 0);
  sg.tree_edges = fam.tree_edges;
  sg.cut = MovingCut::unit(g);
  sg.beta = cut_distance(g, sg.cut, PairSet::from_part_paths(fam.paths));
  sg.capacity = 0;
  return sg;
}

class ChatterProgram : public NodeProgram {
 public:
  explicit ChatterProgram(int rounds) : rounds_(rounds) {}
  void on_round(const NodeCtx& ctx, int round, const std::vector<Inbound>&,
                std::vector<std::pair<NodeId, Message>>& out) override {
    if (round > rounds_) {
      halt(0);
      return;
    }
    for (NodeId w : *ctx.neighbors) {
      Message m = make_message({std::int64_t((ctx.id * 31 + round) & 7)});
      m.bits = 1;
      out.emplace_back(w, m);
    }
  }

 private:
  int rounds_;
};

// ---- criteria -------------------------------------------------------------

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  long long mismatches = 0, cases = 0;
  for (int path_len = 3; path_len <= 7; ++path_len) {
    auto fam = gen_gadget_family(8, path_len);
    const Graph& g = fam.graph;
    StrictGadget sg = family_gadget(g, fam);
    for (int xm = 0; xm < 256; ++xm)
      for (int ym = 0; ym < 256; ++ym) {
        std::vector<int> x(8), y(8);
        bool want = true;
        for (int i = 0; i < 8; ++i) {
          x[i] = xm >> i & 1;
          y[i] = ym >> i & 1;
          if (x[i] & y[i]) want = false;
        }
        auto ind = build_disjointness_instance(g, sg, x, y);
        if (spanning_connected(g, ind) != want) ++mismatches;
        ++cases;
      }
  }
  double sec = std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
  report(1, mismatches == 0 && sec < 60,
         "disjointness reduction, 5 miniatures k=8, exhaustive",
         std::to_string(cases) + " cases, " +
             std::to_string(mismatches) + " mismatches, " +
             std::to_string(int(sec)) + "s");
}

void criterion_2() {
  int violations = 0;
  for (int t = 0; t < 200; ++t) {
    int n = 6 + int(derive_seed(2, t, 1) % 15);
    Graph g = gen_random_connected(n, 0.3, derive_seed(2, t, 2));
    MovingCut mc;
    mc.ell.resize(g.m());
    for (EdgeId e = 0; e < g.m(); ++e)
      mc.ell[e] = 1 + int(derive_seed(2, t, 3 + e) % 6);
    PairSet ps;
    NodeId s = NodeId(derive_seed(2, t, 500) % n);
    NodeId q = NodeId(derive_seed(2, t, 501) % n);
    if (s == q) q = (q + 1) % n;
    ps.pairs = {{s, q}};
    ScaleFactor c = scale_schedule(1 + int(derive_seed(2, t, 502) % 8));
    std::int64_t gamma = cut_capacity(mc);
    std::int64_t beta = cut_distance(g, mc, ps);
    MovingCut scaled = scale_cut(mc, c);
    std::int64_t cap2 = cut_capacity(scaled);
    std::int64_t beta2 = cut_distance(g, scaled, ps);
    if (cap2 * c.num > gamma * c.den) ++violations;          // cap <= g/c
    if (beta2 * (c.num + c.den) < beta * c.den) ++violations;  // b/(1+c)
  }
  report(2, violations == 0, "moving-cut scaling bounds, 200 random cases",
         std::to_string(violations) + " violations");
}

void criterion_3() {
  int violations = 0, traces = 0;
  SimConfig cfg;
  for (int t = 0; t < 20; ++t) {
    Graph g = t % 2 == 0
                  ? gen_grid(3 + t % 4, 4 + t % 5)
                  : gen_random_connected(10 + t, 0.25, derive_seed(3, t));
    cfg.seed = t;
    int bw = cfg.bandwidth_for(g.n());
    PairSet ps;
    ps.pairs = {{0, g.n() - 1}};
    int rounds = 2 + t % 5;
    MovingCut mc;
    // trace length is rounds+1 (halting round included); beta >= ell > 2T
    mc.ell.assign(g.m(), 2 * rounds + 5);
    Trace tr = run(g, cfg, [&](NodeId) {
      return std::make_unique<ChatterProgram>(rounds);
    });
    auto ext = extract_two_party_protocol(tr, g, mc, ps, bw);
    ++traces;
    violations += ext.active_round_violations;
    if (ext.alice_bits + ext.bob_bits > ext.bound) ++violations;
  }
  report(3, violations == 0, "two-party accounting over simulator traces",
         std::to_string(traces) + " traces, " + std::to_string(violations) +
             " violations");
}

void criterion_4_5() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok4 = true;
  std::string det4;
  try {
    auto fam = gen_gadget_family(2000, 200);
    const Graph& g = fam.graph;
    auto cr = crown_from_pairs(g, fam.paths);
    auto cchk = validate_crown(g, cr.paths, cr.crown, cr.universe,
                               cr.diameter);
    auto rg = crown_to_relaxed(g, cr.crown, cr.paths);
    auto rchk = validate_relaxed(g, rg, cr.diameter);
    int u = int(cr.crown.useful.size());
    int p = int(rg.paths.size());
    ok4 = cchk.ok && rchk.ok && u >= 8 && p >= 2;
    double sec = std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
    ok4 = ok4 && sec < 300;
    det4 = "|U|=" + std::to_string(u) + " |P|=" + std::to_string(p) + ", " +
           std::to_string(int(sec)) + "s";
  } catch (const std::exception& e) {
    ok4 = false;
    det4 = e.what();
  }
  report(4, ok4, "crown constants at k=2000, L=200", det4);

  bool ok5 = true;
  std::string det5;
  try {
    auto fam = gen_gadget_family(40, 20);
    auto res = gadget_pipeline(fam.graph, fam.paths);
    if (res.diameter_regime) {
      ok5 = false;
      det5 = "fell into diameter regime: " + res.note;
    } else {
      auto chk = validate_strict(fam.graph, res.gadget);
      ok5 = chk.ok && res.gadget.beta >= 1 &&
            res.gadget.capacity < std::int64_t(res.gadget.paths.size());
      det5 = chk.ok ? "beta'=" + std::to_string(res.gadget.beta) +
                          " gamma=" + std::to_string(res.gadget.capacity) +
                          " |P|=" + std::to_string(res.gadget.paths.size())
                    : chk.reason;
    }
  } catch (const std::exception& e) {
    ok5 = false;
    det5 = e.what();
  }
  report(5, ok5, "strictified gadget from the lp-searched cut", det5);
}

void criterion_6() {
  long long cases = 0, violations = 0;
  for (int n = 2; n <= 6; ++n) {
    for (const auto& es : oracle::connected_graphs(n)) {
      Graph g = Graph::from_edges(n, es);
      for (NodeId s = 0; s < n; ++s)
        for (NodeId t = s + 1; t < n; ++t) {
          PairSet ps;
          ps.pairs = {{s, t}};
          auto ex = search_cut_exact(g, ps, 3);
          auto lp = search_cut_lp(g, ps);
          bool okx = validate_cut(g, ex.cut, ps).ok;
          bool okl = validate_cut(g, lp.cut, ps).ok;
          if (!okx || !okl || ex.beta < lp.beta) ++violations;
          ++cases;
        }
    }
  }
  report(6, violations == 0,
         "cut search soundness, all graphs on <= 6 nodes",
         std::to_string(cases) + " cases, " + std::to_string(violations) +
             " violations");
}

void criterion_7() {
  int fails = 0;
  auto provider = [](const Partition& p) {
    Shortcut sc;
    sc.per_part.resize(p.k());
    return sc;
  };
  for (int t = 0; t < 100; ++t) {
    int n = 8 + int(derive_seed(7, t, 1) % 57);
    Graph g = gen_random_connected(n, 0.12, derive_seed(7, t, 2));
    std::vector<std::int64_t> w(g.m());
    for (EdgeId e = 0; e < g.m(); ++e)
      w[e] = 1 + std::int64_t(derive_seed(7, t, 3 + e) % 1000000);
    SimConfig cfg;
    cfg.supported = true;
    cfg.seed = t;
    auto mst = boruvka_mst(g, cfg, w, provider);
    if (mst.weight != oracle::kruskal_weight(g, w)) ++fails;

    Partition parts = random_forest_partition(g, derive_seed(7, t, 4),
                                              2 + int(derive_seed(7, t, 5) % 5));
    Shortcut sc;
    sc.per_part.resize(parts.k());
    std::vector<std::int64_t> values(g.n());
    for (NodeId v = 0; v < g.n(); ++v)
      values[v] = std::int64_t(derive_seed(7, t, 600 + v) % 1000000) - 500000;
    AggOp op = t % 3 == 0 ? AggOp::Min : t % 3 == 1 ? AggOp::Max : AggOp::Sum;
    auto agg = partwise_aggregate(g, cfg, parts, sc, values, op);
    for (int i = 0; i < parts.k(); ++i) {
      std::int64_t want = agg_identity(op);
      for (NodeId v : parts.parts[i])
        want = op == AggOp::Min   ? std::min(want, values[v])
               : op == AggOp::Max ? std::max(want, values[v])
                                  : want + values[v];
      for (NodeId v : parts.parts[i])
        if (agg.value[v] != want) ++fails;
    }
    int lg = ceil_log2(std::max(n, 2));
    if (agg.trace.rounds > 32 * (agg.congestion + agg.dilation) * lg * lg)
      ++fails;
  }
  report(7, fails == 0, "MST vs Kruskal and partwise aggregation, 100 graphs",
         std::to_string(fails) + " failures");
}

void criterion_8() {
  Graph g = gen_grid(16, 16);
  int lg = ceil_log2(g.n());
  int runs = 0, in_phase_budget = 0, validated = 0;
  double rate_sum = 0;
  auto proto = [&](const PairSet& ps) { return bfs_pair_oracle(g, ps); };
  for (int pi = 0; pi < 10; ++pi) {
    Partition parts = random_forest_partition(g, 800 + pi, 4 + pi % 6);
    for (int s = 0; s < 20; ++s) {
      SimConfig cfg;
      cfg.seed = derive_seed(8, pi, s);
      auto res = distributed_partwise_construction(g, cfg, parts, proto);
      ++runs;
      auto q = measure_shortcut(g, parts, res.shortcut);
      if (!res.capped && q.finite) ++validated;
      if (!res.capped && res.phases <= 6 * lg) ++in_phase_budget;
      rate_sum += res.avg_merge_rate;
    }
  }
  double rate = rate_sum / runs;
  bool ok = validated == runs && in_phase_budget * 100 >= runs * 95 &&
            rate >= 0.25 - 0.1;
  report(8, ok, "distributed construction on the 16x16 grid",
         std::to_string(in_phase_budget) + "/" + std::to_string(runs) +
             " within phase budget, avg merge rate " +
             std::to_string(rate).substr(0, 5));
}

void criterion_9() {
  int fails = 0, cases = 0;
  std::vector<Graph> graphs;
  graphs.push_back(gen_random_tree(256, 91));
  graphs.push_back(gen_random_tree(128, 92));
  graphs.push_back(gen_grid(16, 16));
  graphs.push_back(gen_grid(8, 32));
  for (size_t gi = 0; gi < graphs.size(); ++gi) {
    const Graph& g = graphs[gi];
    Partition parts = random_forest_partition(g, 900 + gi, 6);
    int q_measured = 0;
    PairOracle oracle = [&](const Graph& gg, const PairSet& ps) {
      auto sc = bfs_pair_oracle(gg, ps);
      auto m = measure_pair_shortcut(gg, ps, sc);
      q_measured = std::max(q_measured, m.quality());
      return sc;
    };
    auto lift = lift_pairs_to_parts(g, parts, oracle);
    auto m = measure_shortcut(g, parts, lift.shortcut);
    int lg = ceil_log2(g.n());
    ++cases;
    if (!m.finite || m.quality() > 4 * q_measured * lg * lg) ++fails;
  }
  report(9, fails == 0, "heavy-light lifting quality on trees and grids",
         std::to_string(cases) + " instances, " + std::to_string(fails) +
             " failures");
}

void criterion_10() {
  Graph g = gen_grid(8, 8);
  PairSet ps;
  ps.pairs = {{0, 63}, {7, 56}, {3, 60}, {24, 39}, {16, 47}, {8, 55}};
  Demand dem;
  for (auto [s, t] : ps.pairs) dem.entries.emplace_back(s, t, 1.0);
  const int h = 16;
  auto opt = opt_h(g, dem, h);
  double alpha = std::max(opt.value, 1.0);
  int lg = ceil_log2(g.n());
  int dil_fails = 0, cong_ok = 0;
  for (int seed = 0; seed < 100; ++seed) {
    auto sc = sample_shortcuts(g, opt.witness, derive_seed(10, seed));
    auto m = measure_pair_shortcut(g, ps, sc);
    if (m.dilation > opt.witness.dilation()) ++dil_fails;
    if (m.congestion <= 4.0 * lg * alpha * h) ++cong_ok;
  }
  report(10, dil_fails == 0 && cong_ok >= 95,
         "routing sampling bounds on the 8x8 grid",
         std::to_string(dil_fails) + " dilation fails, " +
             std::to_string(cong_ok) + "/100 congestion within budget");
}

void criterion_11() {
#ifndef CLI_PATH
  report(11, false, "CSV determinism", "CLI path not configured");
#else
  auto base = fs::temp_directory_path() / "slab_accept";
  fs::remove_all(base);
  fs::create_directories(base);
  std::string cli = CLI_PATH;
  auto sh = [&](const std::string& cmd) {
    return std::system((cmd + " > /dev/null 2>&1").c_str()) == 0;
  };
  bool ok = sh(cli + " gen --kind grid --rows 5 --cols 5 --out-dir " +
               (base / "in").string());
  {
    std::ofstream pf(base / "in" / "pairs.txt");
    pf << "0 24\n4 20\n";
    std::ofstream qf(base / "in" / "parts.txt");
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 5; ++c) qf << r << " " << (r * 5 + c) << "\n";
  }
  std::string in = (base / "in").string();
  for (const std::string d : {"A", "B"}) {
    std::string out = (base / d).string();
    ok = ok &&
         sh(cli + " sim --graph " + in + "/graph.txt --parts " + in +
            "/parts.txt --op aggregate --seed 7 --seeds 4 --jobs " +
            (d == "A" ? "4" : "1") + " --out-dir " + out);
    ok = ok && sh(cli + " mcut --graph " + in + "/graph.txt --pairs " + in +
                  "/pairs.txt --seed 7 --out-dir " + out);
    ok = ok && sh(cli + " report --out-dir " + out);
  }
  auto same = [&](const std::string& f) {
    std::ifstream a(base / "A" / f), b(base / "B" / f);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    return a.good() == b.good() && sa.str() == sb.str() &&
           !sa.str().empty();
  };
  ok = ok && same("sim.csv") && same("mcut.csv") && same("combined.csv");
  report(11, ok, "CSV bodies byte-identical across same-seed runs", "");
  fs::remove_all(base);
#endif
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  std::cout << (failures == 0 ? "ACCEPTANCE: all 11 criteria passed"
                              : "ACCEPTANCE: " + std::to_string(failures) +
                                    " criteria FAILED")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
