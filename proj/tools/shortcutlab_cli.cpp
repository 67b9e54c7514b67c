// shortcutlab: batch driver for the graph-parameter toolkit and the round
// simulator. Subcommands write CSV rows (deterministic bodies, sorted) plus
// a sibling .times file so wall time never perturbs byte-identity checks.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "shortcutlab/gadget.hpp"
#include "shortcutlab/instances.hpp"
#include "shortcutlab/io.hpp"
#include "shortcutlab/moving_cut.hpp"
#include "shortcutlab/partition.hpp"
#include "shortcutlab/routing.hpp"
#include "shortcutlab/sim.hpp"

namespace fs = std::filesystem;
using namespace shortcutlab;

namespace {

bool verbose() {
  const char* v = std::getenv("SHORTCUTLAB_LOG");
  return v != nullptr && *v != '\0';
}

void log(const std::string& msg) {
  if (verbose()) std::cerr << "[shortcutlab] " << msg << "\n";
}

constexpr const char* kHeader =
    "cmd,instance,seed,param,k,n,m,c,d,Q,beta,gamma,rounds,bits,ok";

struct Row {
  std::vector<std::string> cells{std::vector<std::string>(15)};
  Row(const std::string& cmd, const std::string& instance,
      std::uint64_t seed) {
    cells[0] = cmd;
    cells[1] = instance;
    cells[2] = std::to_string(seed);
  }
  Row& set(int col, const std::string& v) {
    cells[col] = v;
    return *this;
  }
  Row& set(int col, std::int64_t v) { return set(col, std::to_string(v)); }
  std::string line() const {
    std::string out;
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    return out;
  }
};
enum { kParam = 3, kK, kN, kM, kC, kD, kQ, kBeta, kGamma, kRounds, kBits, kOk };

void write_rows(const fs::path& out_dir, const std::string& name,
                std::vector<Row> rows, const std::vector<double>& wall_ms) {
  fs::create_directories(out_dir);
  std::vector<std::string> lines;
  for (const auto& r : rows) lines.push_back(r.line());
  std::sort(lines.begin(), lines.end());
  std::ofstream f(out_dir / (name + ".csv"));
  f << kHeader << "\n";
  for (const auto& l : lines) f << l << "\n";
  std::ofstream t(out_dir / (name + ".times"));
  for (double ms : wall_ms) t << ms << "\n";
  log("wrote " + (out_dir / (name + ".csv")).string());
}

std::string stem_of(const std::string& path) {
  return fs::path(path).stem().string();
}

template <class F>
void parallel_for(int count, int jobs, F&& f) {
  if (jobs <= 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::future<void>> pending;
  for (int i = 0; i < count; ++i) {
    pending.push_back(std::async(std::launch::async, f, i));
    if (static_cast<int>(pending.size()) >= jobs) {
      pending.front().get();
      pending.erase(pending.begin());
    }
  }
  for (auto& p : pending) p.get();
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

std::int64_t trace_bits(const Trace& t) {
  std::int64_t total = 0;
  for (const auto& e : t.entries) total += e.bits;
  return total;
}

std::int64_t kruskal_reference(const Graph& g,
                               const std::vector<std::int64_t>& w) {
  std::vector<int> order(g.m()), parent(g.n());
  std::iota(order.begin(), order.end(), 0);
  std::iota(parent.begin(), parent.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::pair(w[a], a) < std::pair(w[b], b);
  });
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::int64_t total = 0;
  for (int e : order) {
    auto [u, v] = g.edge(e);
    if (find(u) != find(v)) {
      parent[find(u)] = find(v);
      total += w[e];
    }
  }
  return total;
}

// ---- subcommands ----------------------------------------------------------

struct GenOpts {
  std::string kind = "grid";
  int rows = 4, cols = 4, n = 16, k = 9, path_len = 5;
  double p = 0.2;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

int cmd_gen(const GenOpts& o) {
  fs::create_directories(o.out_dir);
  Graph g;
  if (o.kind == "grid") {
    g = gen_grid(o.rows, o.cols);
  } else if (o.kind == "cycle") {
    g = gen_cycle(o.n);
  } else if (o.kind == "tree") {
    g = gen_random_tree(o.n, o.seed);
  } else if (o.kind == "random") {
    g = gen_random_connected(o.n, o.p, o.seed);
  } else if (o.kind == "gadget-family") {
    auto fam = gen_gadget_family(o.k, o.path_len);
    g = fam.graph;
    std::ofstream pf(fs::path(o.out_dir) / "pairs.txt");
    write_pairs(pf, PairSet::from_part_paths(fam.paths));
    std::ofstream wf(fs::path(o.out_dir) / "paths.txt");
    write_part_paths(wf, fam.paths);
  } else {
    std::cerr << "unknown kind " << o.kind << "\n";
    return 2;
  }
  std::ofstream gf(fs::path(o.out_dir) / "graph.txt");
  write_graph_text(gf, g);
  log("gen " + o.kind + ": n=" + std::to_string(g.n()) +
      " m=" + std::to_string(g.m()));
  return 0;
}

struct CommonOpts {
  std::string graph, pairs, parts, paths, mode = "lp", op = "aggregate";
  std::uint64_t seed = 1;
  int seeds = 1, jobs = 1;
  std::string out_dir = ".";
};

int cmd_quality(const CommonOpts& o) {
  auto lg = load_graph(o.graph);
  const Graph& g = lg.graph;
  std::vector<Row> rows;
  std::vector<double> wall;
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  if (!o.pairs.empty()) {
    std::ifstream pf(o.pairs);
    PairSet ps = read_pairs(pf);
    auto qi = quality_interval(g, ps);
    auto m = measure_pair_shortcut(g, ps, qi.pair_witness);
    ok = m.finite && m.quality() <= qi.upper;
    Row r("quality", stem_of(o.graph), o.seed);
    r.set(kParam, "pairs lower=" + std::to_string(qi.lower))
        .set(kK, ps.k())
        .set(kN, g.n())
        .set(kM, g.m())
        .set(kC, m.congestion)
        .set(kD, m.dilation)
        .set(kQ, qi.upper)
        .set(kOk, ok ? "pass" : "fail");
    rows.push_back(r);
  } else if (!o.parts.empty()) {
    std::ifstream pf(o.parts);
    Partition parts{read_partition(pf, g.n())};
    auto qi = quality_interval(g, parts);
    auto m = measure_shortcut(g, parts, qi.part_witness);
    ok = m.finite && m.quality() <= qi.upper;
    Row r("quality", stem_of(o.graph), o.seed);
    r.set(kParam, "parts lower=" + std::to_string(qi.lower))
        .set(kK, parts.k())
        .set(kN, g.n())
        .set(kM, g.m())
        .set(kC, m.congestion)
        .set(kD, m.dilation)
        .set(kQ, qi.upper)
        .set(kOk, ok ? "pass" : "fail");
    rows.push_back(r);
  } else {
    std::cerr << "quality needs --pairs or --parts\n";
    return 2;
  }
  wall.push_back(ms_since(t0));
  write_rows(o.out_dir, "quality", std::move(rows), wall);
  if (!ok) std::cerr << "witness quality above its recorded bound\n";
  return ok ? 0 : 1;
}

int cmd_mcut(const CommonOpts& o) {
  auto lg = load_graph(o.graph);
  const Graph& g = lg.graph;
  std::ifstream pf(o.pairs);
  PairSet ps = read_pairs(pf);
  auto t0 = std::chrono::steady_clock::now();
  CutSearchResult res =
      o.mode == "exact" ? search_cut_exact(g, ps) : search_cut_lp(g, ps);
  auto chk = validate_cut(g, res.cut, ps);
  Row r("mcut", stem_of(o.graph), o.seed);
  r.set(kParam, o.mode)
      .set(kK, ps.k())
      .set(kN, g.n())
      .set(kM, g.m())
      .set(kBeta, res.beta)
      .set(kGamma, res.capacity)
      .set(kOk, chk.ok ? "pass" : "fail");
  write_rows(o.out_dir, "mcut", {r}, {ms_since(t0)});
  if (!chk.ok) std::cerr << "cut validator: " << chk.reason << "\n";
  return chk.ok ? 0 : 1;
}

int cmd_gadget(const CommonOpts& o) {
  auto lg = load_graph(o.graph);
  const Graph& g = lg.graph;
  PartPaths pp;
  if (!o.paths.empty()) {
    std::ifstream f(o.paths);
    pp = read_part_paths(f);
  } else if (!o.pairs.empty()) {
    std::ifstream f(o.pairs);
    PairSet ps = read_pairs(f);
    pp.paths = bfs_pair_oracle(g, ps).paths;
  } else {
    std::cerr << "gadget needs --pairs or --paths\n";
    return 2;
  }
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  Row r("gadget", stem_of(o.graph), o.seed);
  r.set(kK, pp.k()).set(kN, g.n()).set(kM, g.m());
  try {
    pp.validate(g);
    auto res = gadget_pipeline(g, pp);
    r.set(kBeta, res.beta_in).set(kD, res.d_used);
    if (res.diameter_regime) {
      r.set(kParam, "diameter regime").set(kOk, "pass");
      log("diameter regime: " + res.note);
    } else {
      auto chk = validate_strict(g, res.gadget);
      ok = chk.ok;
      r.set(kParam, "strict")
          .set(kGamma, res.gadget.capacity)
          .set(kOk, ok ? "pass" : "fail");
      if (ok) {
        fs::create_directories(o.out_dir);
        write_gadget_certificate(
            (fs::path(o.out_dir) / "gadget_certificate.json").string(), g,
            res.gadget);
      } else {
        std::cerr << "strict validator: " << chk.reason << "\n";
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    r.set(kParam, "error").set(kOk, "fail");
    std::cerr << "gadget: " << e.what() << "\n";
  }
  write_rows(o.out_dir, "gadget", {r}, {ms_since(t0)});
  return ok ? 0 : 1;
}

int cmd_sim(const CommonOpts& o) {
  auto lg = load_graph(o.graph);
  const Graph& g = lg.graph;
  Partition parts;
  if (!o.parts.empty()) {
    std::ifstream pf(o.parts);
    parts.parts = read_partition(pf, g.n());
  }
  std::vector<Row> rows(o.seeds, Row("sim", stem_of(o.graph), 0));
  std::vector<double> wall(o.seeds, 0);
  std::vector<char> okv(o.seeds, 1);

  auto one_seed = [&](int i) {
    std::uint64_t seed = o.seed + i;
    auto t0 = std::chrono::steady_clock::now();
    SimConfig cfg;
    cfg.supported = true;
    cfg.seed = seed;
    Row r("sim", stem_of(o.graph), seed);
    r.set(kParam, o.op).set(kN, g.n()).set(kM, g.m());
    bool ok = true;
    if (o.op == "aggregate") {
      Shortcut sc;
      sc.per_part.resize(parts.k());
      std::vector<std::int64_t> values(g.n());
      for (NodeId v = 0; v < g.n(); ++v)
        values[v] = std::int64_t(derive_seed(seed, v) % 100000);
      auto res = partwise_aggregate(g, cfg, parts, sc, values, AggOp::Sum);
      for (const auto& part : parts.parts) {
        std::int64_t want = 0;
        for (NodeId v : part) want += values[v];
        for (NodeId v : part) ok = ok && res.value[v] == want;
      }
      r.set(kK, parts.k())
          .set(kC, res.congestion)
          .set(kD, res.dilation)
          .set(kQ, res.congestion + res.dilation)
          .set(kRounds, res.trace.rounds)
          .set(kBits, trace_bits(res.trace));
    } else if (o.op == "mst") {
      std::vector<std::int64_t> w = lg.weighted
                                        ? lg.weights
                                        : std::vector<std::int64_t>(g.m());
      if (!lg.weighted)
        for (EdgeId e = 0; e < g.m(); ++e)
          w[e] = 1 + std::int64_t(derive_seed(seed, 0x33, e) % 1000000);
      auto provider = [](const Partition& p) {
        Shortcut sc;
        sc.per_part.resize(p.k());
        return sc;
      };
      auto res = boruvka_mst(g, cfg, w, provider);
      ok = res.weight == kruskal_reference(g, w);
      r.set(kK, int(res.mst.size()))
          .set(kBeta, res.weight)
          .set(kRounds, res.rounds)
          .set(kBits, trace_bits(res.trace));
    } else if (o.op == "verify") {
      std::vector<char> ind(g.m(), 0);
      for (EdgeId e = 0; e < g.m(); ++e)
        ind[e] = derive_seed(seed, 0x77, e) % 10 < 8;
      SimConfig plain;
      plain.seed = seed;
      auto res = verify_spanning_connected(g, plain, ind);
      ok = res.spanning_connected == spanning_connected(g, ind);
      r.set(kBeta, res.spanning_connected ? 1 : 0)
          .set(kRounds, res.rounds)
          .set(kBits, trace_bits(res.trace));
    } else if (o.op == "floors") {
      auto rep = diameter_floor_checks(g, cfg);
      std::string param = "floors";
      std::int64_t first = 0;
      for (const auto& row : rep.rows) {
        ok = ok && row.ok;
        param += " " + row.check + "=" + std::to_string(row.first_diff_round) +
                 "/" + std::to_string(row.bound);
        first = std::max<std::int64_t>(first, row.first_diff_round);
      }
      r.set(kParam, param).set(kRounds, first);
    } else if (o.op == "construct") {
      auto proto = [&](const PairSet& ps) { return bfs_pair_oracle(g, ps); };
      auto res = distributed_partwise_construction(g, cfg, parts, proto);
      auto q = measure_shortcut(g, parts, res.shortcut);
      ok = !res.capped && q.finite;
      r.set(kK, parts.k())
          .set(kC, q.congestion)
          .set(kD, q.dilation)
          .set(kQ, q.quality())
          .set(kRounds, res.phases);
    } else {
      throw std::runtime_error("unknown sim op " + o.op);
    }
    r.set(kOk, ok ? "pass" : "fail");
    rows[i] = r;
    okv[i] = ok;
    wall[i] = ms_since(t0);
  };
  try {
    parallel_for(o.seeds, o.jobs, one_seed);
  } catch (const std::exception& e) {
    std::cerr << "sim: " << e.what() << "\n";
    return 1;
  }
  write_rows(o.out_dir, "sim", rows, wall);
  bool all_ok = std::all_of(okv.begin(), okv.end(), [](char c) { return c; });
  if (!all_ok) std::cerr << "sim: some seeds failed their oracle check\n";
  return all_ok ? 0 : 1;
}

int cmd_report(const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::vector<std::string> body;
  nlohmann::json summary;
  summary["files"] = nlohmann::json::array();
  for (const auto& entry : fs::directory_iterator(out_dir)) {
    if (entry.path().extension() != ".csv") continue;
    if (entry.path().filename() == "combined.csv") continue;
    std::ifstream f(entry.path());
    std::string line;
    std::getline(f, line);  // header
    int total = 0, passed = 0;
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      body.push_back(line);
      ++total;
      if (line.size() >= 4 && line.substr(line.size() - 4) == "pass") ++passed;
    }
    summary["files"].push_back({{"name", entry.path().filename().string()},
                                {"rows", total},
                                {"passed", passed}});
  }
  std::sort(body.begin(), body.end());
  std::ofstream out(fs::path(out_dir) / "combined.csv");
  out << kHeader << "\n";
  for (const auto& l : body) out << l << "\n";
  summary["total_rows"] = body.size();
  std::ofstream js(fs::path(out_dir) / "summary.json");
  js << summary.dump(2) << "\n";
  log("report: " + std::to_string(body.size()) + " rows");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-congestion shortcut and moving-cut experiment driver"};
  app.require_subcommand(1);

  GenOpts gen;
  auto* sg = app.add_subcommand("gen", "generate benchmark instances");
  sg->add_option("--kind", gen.kind,
                 "grid|cycle|tree|random|gadget-family");
  sg->add_option("--rows", gen.rows);
  sg->add_option("--cols", gen.cols);
  sg->add_option("--n", gen.n);
  sg->add_option("--p", gen.p);
  sg->add_option("--k", gen.k);
  sg->add_option("--path-len", gen.path_len);
  sg->add_option("--seed", gen.seed);
  sg->add_option("--out-dir", gen.out_dir);

  CommonOpts q, mc, gd, sm;
  auto common = [](CLI::App* c, CommonOpts& o, bool need_graph = true) {
    auto* opt = c->add_option("--graph", o.graph);
    if (need_graph) opt->required();
    c->add_option("--pairs", o.pairs);
    c->add_option("--parts", o.parts);
    c->add_option("--paths", o.paths);
    c->add_option("--seed", o.seed);
    c->add_option("--seeds", o.seeds);
    c->add_option("--jobs", o.jobs);
    c->add_option("--mode", o.mode);
    c->add_option("--op", o.op);
    c->add_option("--out-dir", o.out_dir);
  };
  auto* sq = app.add_subcommand("quality", "shortcut quality brackets");
  common(sq, q);
  auto* sm1 = app.add_subcommand("mcut", "moving cut search");
  common(sm1, mc);
  auto* sg2 = app.add_subcommand("gadget", "disjointness gadget pipeline");
  common(sg2, gd);
  auto* ss = app.add_subcommand("sim", "round simulator operations");
  common(ss, sm);
  std::string report_dir = ".";
  auto* sr = app.add_subcommand("report", "aggregate CSVs into a summary");
  sr->add_option("--out-dir", report_dir);

  CLI11_PARSE(app, argc, argv);
  try {
    if (sg->parsed()) return cmd_gen(gen);
    if (sq->parsed()) return cmd_quality(q);
    if (sm1->parsed()) return cmd_mcut(mc);
    if (sg2->parsed()) return cmd_gadget(gd);
    if (ss->parsed()) return cmd_sim(sm);
    if (sr->parsed()) return cmd_report(report_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
