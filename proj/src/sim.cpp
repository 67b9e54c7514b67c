#include "shortcutlab/sim.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "shortcutlab/instances.hpp"

namespace shortcutlab {

namespace {

int ceil_log2_int(std::int64_t x) {
  int b = 0;
  while ((std::int64_t(1) << b) < x) ++b;
  return b;
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);  // keep the lowest id as the root
    p[b] = a;
    return true;
  }
};

std::uint64_t hash_words(const Message& m) {
  std::uint64_t h = mix64(0x77acee ^ std::uint64_t(m.bits));
  for (std::int64_t w : m.words) h = mix64(h ^ mix64(std::uint64_t(w)));
  return h;
}

}  // namespace

int SimConfig::bandwidth_for(int n) const {
  if (bandwidth_bits > 0) return bandwidth_bits;
  std::int64_t p = 1;
  for (int i = 0; i < 4; ++i) p *= std::max(n, 2);
  return ceil_log2_int(p);  // ceil(4 log2 n)
}

int payload_bits(const std::vector<std::int64_t>& words) {
  int bits = 0;
  for (std::int64_t w : words) {
    std::uint64_t zig = (std::uint64_t(w) << 1) ^ std::uint64_t(w >> 63);
    bits += std::bit_width(zig) + 1;
  }
  return std::max(bits, 1);
}

Message make_message(std::vector<std::int64_t> words) {
  Message m;
  m.bits = payload_bits(words);
  m.words = std::move(words);
  return m;
}

std::uint64_t NodeCtx::coin(std::uint64_t round, std::uint64_t salt) const {
  return derive_seed(seed, std::uint64_t(id) + 1, round, salt);
}

std::uint64_t NodeCtx::shared_coin(std::uint64_t round,
                                   std::uint64_t salt) const {
  return derive_seed(seed, 0, round, salt);
}

Trace run(const Graph& g, const SimConfig& cfg, const ProgramFactory& make) {
  const int n = g.n();
  const int bandwidth = cfg.bandwidth_for(n);
  const int diam = cfg.supported ? diameter(g) : 0;

  std::vector<std::unique_ptr<NodeProgram>> progs(n);
  std::vector<NodeCtx> ctx(n);
  for (NodeId v = 0; v < n; ++v) {
    ctx[v].id = v;
    ctx[v].n = n;
    ctx[v].diameter = diam;
    ctx[v].graph = cfg.supported ? &g : nullptr;
    ctx[v].neighbors = &g.neighbors(v);
    ctx[v].seed = cfg.seed;
    progs[v] = make(v);
    progs[v]->init(ctx[v]);
  }

  Trace tr;
  tr.halt_round.assign(n, 0);
  std::vector<std::vector<Inbound>> inbox(n), next(n);
  std::vector<std::pair<NodeId, Message>> out;

  int round = 0;
  while (true) {
    bool all_halted = true;
    for (NodeId v = 0; v < n; ++v)
      if (!progs[v]->halted()) all_halted = false;
    if (all_halted) break;
    ++round;
    if (round > cfg.round_cap)
      throw SimError("non-termination: round cap " +
                     std::to_string(cfg.round_cap) + " exceeded");

    // (edge, dir) -> accumulated bits and payload hash for this round
    std::map<std::pair<EdgeId, int>, std::pair<int, std::uint64_t>> load;
    for (NodeId v = 0; v < n; ++v) {
      if (progs[v]->halted()) continue;
      out.clear();
      progs[v]->on_round(ctx[v], round, inbox[v], out);
      if (progs[v]->halted() && tr.halt_round[v] == 0)
        tr.halt_round[v] = round;
      for (auto& [w, msg] : out) {
        auto eid = g.edge_id(v, w);
        if (!eid) throw SimError("send to non-neighbor");
        if (msg.bits < 1) throw SimError("message with no declared bits");
        int dir = (g.edge(*eid).first == v) ? 0 : 1;
        auto& slot = load[{*eid, dir}];
        slot.first += msg.bits;
        if (slot.first > bandwidth)
          throw SimError("bandwidth exceeded on edge " + std::to_string(*eid) +
                         " at round " + std::to_string(round));
        slot.second = mix64(slot.second ^ hash_words(msg));
        if (!progs[w]->halted()) next[w].push_back({v, std::move(msg)});
      }
    }
    for (auto& [key, slot] : load)
      tr.entries.push_back(
          {round, key.first, key.second, slot.first, slot.second});
    for (NodeId v = 0; v < n; ++v) {
      inbox[v] = std::move(next[v]);
      next[v].clear();
    }
    tr.rounds = round;
  }

  tr.outputs.resize(n);
  for (NodeId v = 0; v < n; ++v) tr.outputs[v] = progs[v]->output();
  return tr;
}

void write_trace_jsonl(const std::string& path, const Graph& g,
                       const Trace& t) {
  std::ofstream f(path);
  if (!f) throw SimError("cannot open " + path);
  for (const auto& e : t.entries) {
    auto [u, v] = g.edge(e.edge);
    f << "{\"round\":" << e.round << ",\"edge\":" << e.edge << ",\"u\":" << u
      << ",\"v\":" << v << ",\"dir\":" << e.dir << ",\"bits\":" << e.bits
      << ",\"payload\":\"" << std::hex << e.payload_hash << std::dec
      << "\"}\n";
  }
}

// ---- chunk framing --------------------------------------------------------
// Every program message below carries [payload..., chunk_index, chunk_count].
// A record whose cost exceeds the bandwidth is sent as chunk_count messages
// on consecutive flushes; for convenience each chunk repeats the decoded
// payload and the receiver acts on the final chunk only. Declared bits split
// the record cost across the chunks.

namespace {

std::vector<Message> chunk_record(const std::vector<std::int64_t>& words,
                                  int bandwidth) {
  int total = payload_bits(words) + 2;  // 2 bits of framing
  int k = (total + bandwidth - 1) / bandwidth;
  if (k < 1) k = 1;
  int per = (total + k - 1) / k;
  std::vector<Message> out;
  for (int j = 0; j < k; ++j) {
    Message m;
    m.words = words;
    m.words.push_back(j);
    m.words.push_back(k);
    m.bits = std::min(per, total - j * per);
    if (m.bits < 1) m.bits = 1;
    out.push_back(std::move(m));
  }
  return out;
}

// Strips the framing; returns the payload only for a record's final chunk.
std::optional<std::vector<std::int64_t>> complete_record(const Message& m) {
  if (m.words.size() < 2) throw SimError("malformed chunk");
  std::int64_t j = m.words[m.words.size() - 2];
  std::int64_t k = m.words.back();
  if (j + 1 < k) return std::nullopt;
  return std::vector<std::int64_t>(m.words.begin(), m.words.end() - 2);
}

// Per-neighbor FIFO of framed chunks, flushed within the per-round budget.
struct OutQueues {
  std::map<NodeId, std::deque<Message>> q;

  void push(NodeId to, const std::vector<std::int64_t>& words,
            int bandwidth) {
    for (auto& m : chunk_record(words, bandwidth)) q[to].push_back(std::move(m));
  }
  void flush(int bandwidth, std::vector<std::pair<NodeId, Message>>& out) {
    for (auto& [to, dq] : q) {
      int budget = bandwidth;
      while (!dq.empty() && dq.front().bits <= budget) {
        budget -= dq.front().bits;
        out.emplace_back(to, std::move(dq.front()));
        dq.pop_front();
      }
    }
  }
  bool empty() const {
    for (auto& [to, dq] : q)
      if (!dq.empty()) return false;
    return true;
  }
};

std::int64_t combine(AggOp op, std::int64_t a, std::int64_t b) {
  switch (op) {
    case AggOp::Min: return std::min(a, b);
    case AggOp::Max: return std::max(a, b);
    case AggOp::Sum: return a + b;
  }
  return a;
}

// ---- partwise aggregation -------------------------------------------------

struct AggRole {
  int part = 0;
  NodeId parent = -1;  // -1 at the tree root
  std::vector<NodeId> children;
  bool member = false;
};

struct AggPlan {
  AggOp op = AggOp::Min;
  int bandwidth = 0;
  std::vector<std::int64_t> values;
  std::vector<std::vector<AggRole>> roles;  // per node
};

class PartAggProgram : public NodeProgram {
 public:
  explicit PartAggProgram(std::shared_ptr<const AggPlan> plan) : plan_(plan) {}

  void init(const NodeCtx& ctx) override {
    const auto& roles = plan_->roles[ctx.id];
    acc_.resize(roles.size());
    pending_.resize(roles.size());
    final_.assign(roles.size(), std::nullopt);
    for (size_t r = 0; r < roles.size(); ++r) {
      acc_[r] = roles[r].member ? plan_->values[ctx.id]
                                : agg_identity(plan_->op);
      pending_[r] = static_cast<int>(roles[r].children.size());
      by_part_[roles[r].part] = static_cast<int>(r);
      if (pending_[r] == 0) complete_up(ctx, static_cast<int>(r));
    }
  }

  void on_round(const NodeCtx& ctx, int, const std::vector<Inbound>& inbox,
                std::vector<std::pair<NodeId, Message>>& out) override {
    for (const auto& in : inbox) {
      auto rec = complete_record(in.msg);
      if (!rec) continue;
      const auto& w = *rec;  // [phase, part, value]
      int r = by_part_.at(static_cast<int>(w[1]));
      if (w[0] == 0) {  // convergecast step from a child
        acc_[r] = combine(plan_->op, acc_[r], w[2]);
        if (--pending_[r] == 0) complete_up(ctx, r);
      } else {  // broadcast step from the parent
        settle(ctx, r, w[2]);
      }
    }
    queues_.flush(plan_->bandwidth, out);
    bool done = queues_.empty();
    for (auto& f : final_)
      if (!f) done = false;
    if (done) {
      std::int64_t res = agg_identity(plan_->op);
      const auto& roles = plan_->roles[ctx.id];
      for (size_t r = 0; r < roles.size(); ++r)
        if (roles[r].member) res = *final_[r];
      halt(res);
    }
  }

 private:
  void complete_up(const NodeCtx& ctx, int r) {
    const auto& role = plan_->roles[ctx.id][r];
    if (role.parent < 0)
      settle(ctx, r, acc_[r]);
    else
      queues_.push(role.parent, {0, role.part, acc_[r]}, plan_->bandwidth);
  }
  void settle(const NodeCtx& ctx, int r, std::int64_t value) {
    final_[r] = value;
    for (NodeId c : plan_->roles[ctx.id][r].children)
      queues_.push(c, {1, plan_->roles[ctx.id][r].part, value},
                   plan_->bandwidth);
  }

  std::shared_ptr<const AggPlan> plan_;
  std::vector<std::int64_t> acc_;
  std::vector<int> pending_;
  std::vector<std::optional<std::int64_t>> final_;
  std::map<int, int> by_part_;
  OutQueues queues_;
};

// BFS tree of one part's augmented subgraph, rooted at the lowest part node.
void plan_part(const Graph& g, const std::vector<NodeId>& part_nodes,
               const std::vector<EdgeId>& h_edges, int part,
               const std::vector<int>& in_part, AggPlan& plan) {
  std::set<EdgeId> eids(h_edges.begin(), h_edges.end());
  for (NodeId v : part_nodes)
    for (EdgeId e : g.incident_edges(v)) {
      NodeId w = g.other_end(e, v);
      if (in_part[v] == part && in_part[w] == part) eids.insert(e);
    }
  std::map<NodeId, std::vector<NodeId>> adj;
  for (EdgeId e : eids) {
    auto [u, v] = g.edge(e);
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (NodeId v : part_nodes) adj[v];  // isolated singleton parts
  for (auto& [v, nb] : adj) std::sort(nb.begin(), nb.end());

  NodeId root = *std::min_element(part_nodes.begin(), part_nodes.end());
  std::map<NodeId, NodeId> parent;
  parent[root] = -1;
  std::deque<NodeId> bfs{root};
  std::vector<NodeId> order;
  while (!bfs.empty()) {
    NodeId v = bfs.front();
    bfs.pop_front();
    order.push_back(v);
    for (NodeId w : adj[v])
      if (!parent.count(w)) {
        parent[w] = v;
        bfs.push_back(w);
      }
  }
  for (NodeId v : part_nodes)
    if (!parent.count(v))
      throw SimError("part not connected under its shortcut");

  std::map<NodeId, int> role_of;
  for (NodeId v : order) {
    role_of[v] = static_cast<int>(plan.roles[v].size());
    AggRole r;
    r.part = part;
    r.parent = parent[v];
    r.member = in_part[v] == part;
    plan.roles[v].push_back(std::move(r));
  }
  for (NodeId v : order)
    if (parent[v] >= 0)
      plan.roles[parent[v]][role_of[parent[v]]].children.push_back(v);
}

}  // namespace

std::int64_t agg_identity(AggOp op) {
  switch (op) {
    case AggOp::Min: return std::numeric_limits<std::int64_t>::max();
    case AggOp::Max: return std::numeric_limits<std::int64_t>::min();
    case AggOp::Sum: return 0;
  }
  return 0;
}

AggregateResult partwise_aggregate(const Graph& g, const SimConfig& cfg,
                                   const Partition& parts, const Shortcut& sc,
                                   const std::vector<std::int64_t>& values,
                                   AggOp op) {
  if (!cfg.supported)
    throw SimError("partwise_aggregate needs supported mode");
  if (static_cast<int>(values.size()) != g.n())
    throw SimError("value vector size mismatch");
  parts.validate(g);
  auto plan = std::make_shared<AggPlan>();
  plan->op = op;
  plan->bandwidth = cfg.bandwidth_for(g.n());
  plan->values = values;
  plan->roles.resize(g.n());
  std::vector<int> in_part = parts.part_of(g);
  for (int i = 0; i < parts.k(); ++i) {
    const std::vector<EdgeId> empty;
    const auto& h =
        i < static_cast<int>(sc.per_part.size()) ? sc.per_part[i] : empty;
    plan_part(g, parts.parts[i], h, i, in_part, *plan);
  }

  AggregateResult res;
  res.trace = run(g, cfg, [&](NodeId) {
    return std::make_unique<PartAggProgram>(plan);
  });
  res.value = res.trace.outputs;
  auto q = measure_shortcut(g, parts, sc);
  res.congestion = q.congestion;
  res.dilation = q.dilation;
  return res;
}

// ---- gather everything to the root, then broadcast ------------------------

namespace {

struct GatherPlan {
  int bandwidth = 0;
  std::vector<NodeId> parent;              // BFS tree of G rooted at 0
  std::vector<std::vector<NodeId>> children;
  std::vector<std::vector<std::int64_t>> records;  // initial, per node
};

GatherPlan make_gather_plan(const Graph& g, int bandwidth) {
  GatherPlan p;
  p.bandwidth = bandwidth;
  p.parent.assign(g.n(), -2);
  p.children.resize(g.n());
  p.records.resize(g.n());
  p.parent[0] = -1;
  std::deque<NodeId> bfs{0};
  while (!bfs.empty()) {
    NodeId v = bfs.front();
    bfs.pop_front();
    for (NodeId w : g.neighbors(v))
      if (p.parent[w] == -2) {
        p.parent[w] = v;
        p.children[v].push_back(w);
        bfs.push_back(w);
      }
  }
  return p;
}

// Message payloads: [0, value] upward record, [1] upward end-of-stream,
// [2, value] downward record, [3] downward end-of-stream.
class GatherBroadcastProgram : public NodeProgram {
 public:
  explicit GatherBroadcastProgram(std::shared_ptr<const GatherPlan> plan)
      : plan_(plan) {}

  void init(const NodeCtx& ctx) override {
    pending_ends_ = static_cast<int>(plan_->children[ctx.id].size());
    for (std::int64_t rec : plan_->records[ctx.id]) take_up(ctx, rec);
    if (pending_ends_ == 0) finish_up(ctx);
  }

  void on_round(const NodeCtx& ctx, int, const std::vector<Inbound>& inbox,
                std::vector<std::pair<NodeId, Message>>& out) override {
    for (const auto& in : inbox) {
      auto rec = complete_record(in.msg);
      if (!rec) continue;
      switch ((*rec)[0]) {
        case 0: take_up(ctx, (*rec)[1]); break;
        case 1:
          if (--pending_ends_ == 0) finish_up(ctx);
          break;
        case 2:
          collected_.push_back((*rec)[1]);
          for (NodeId c : plan_->children[ctx.id])
            queues_.push(c, {2, (*rec)[1]}, plan_->bandwidth);
          break;
        case 3:
          for (NodeId c : plan_->children[ctx.id])
            queues_.push(c, {3}, plan_->bandwidth);
          done_ = true;
          break;
        default: throw SimError("unexpected gather record");
      }
    }
    queues_.flush(plan_->bandwidth, out);
    if (done_ && queues_.empty())
      halt(static_cast<std::int64_t>(collected_.size()));
  }

 private:
  void take_up(const NodeCtx& ctx, std::int64_t rec) {
    if (plan_->parent[ctx.id] < 0)
      collected_.push_back(rec);
    else
      queues_.push(plan_->parent[ctx.id], {0, rec}, plan_->bandwidth);
  }
  void finish_up(const NodeCtx& ctx) {
    if (plan_->parent[ctx.id] < 0) {
      // the root now owns the full list; push it down with an end marker
      for (NodeId c : plan_->children[ctx.id]) {
        for (std::int64_t rec : collected_)
          queues_.push(c, {2, rec}, plan_->bandwidth);
        queues_.push(c, {3}, plan_->bandwidth);
      }
      done_ = true;
    } else {
      queues_.push(plan_->parent[ctx.id], {1}, plan_->bandwidth);
    }
  }

  std::shared_ptr<const GatherPlan> plan_;
  int pending_ends_ = 0;
  bool done_ = false;
  std::vector<std::int64_t> collected_;
  OutQueues queues_;
};

Trace run_gather(const Graph& g, const SimConfig& cfg,
                 std::vector<std::vector<std::int64_t>> records) {
  auto plan = std::make_shared<GatherPlan>(
      make_gather_plan(g, cfg.bandwidth_for(g.n())));
  plan->records = std::move(records);
  return run(g, cfg, [&](NodeId) {
    return std::make_unique<GatherBroadcastProgram>(plan);
  });
}

void merge_trace(Trace& into, const Trace& part) {
  for (TraceEntry e : part.entries) {
    e.round += into.rounds;
    into.entries.push_back(e);
  }
  into.rounds += part.rounds;
}

}  // namespace

// ---- Boruvka --------------------------------------------------------------

MstResult boruvka_mst(
    const Graph& g, const SimConfig& cfg,
    const std::vector<std::int64_t>& weights,
    const std::function<Shortcut(const Partition&)>& shortcut_provider) {
  if (!cfg.supported) throw SimError("boruvka_mst needs supported mode");
  if (static_cast<int>(weights.size()) != g.m())
    throw SimError("weight vector size mismatch");
  const int eid_bits = ceil_log2_int(std::max(g.m(), 2));
  for (std::int64_t w : weights)
    if (w < 0 || w > (std::int64_t(1) << 40))
      throw SimError("weights must lie in [0, 2^40]");

  MstResult res;
  UnionFind uf(g.n());
  std::set<EdgeId> mst;
  auto pack = [&](EdgeId e) {
    return (weights[e] << eid_bits) | std::int64_t(e);
  };

  while (true) {
    std::vector<std::vector<NodeId>> comp_nodes(g.n());
    for (NodeId v = 0; v < g.n(); ++v) comp_nodes[uf.find(v)].push_back(v);
    Partition parts;
    std::vector<int> comp_index(g.n(), -1);
    for (NodeId r = 0; r < g.n(); ++r)
      if (!comp_nodes[r].empty()) {
        comp_index[r] = parts.k();
        parts.parts.push_back(comp_nodes[r]);
      }
    if (parts.k() <= 1) break;

    // per-component minimum outgoing edge, ties by edge id via packing
    std::vector<std::int64_t> values(g.n(), agg_identity(AggOp::Min));
    for (NodeId v = 0; v < g.n(); ++v)
      for (EdgeId e : g.incident_edges(v))
        if (uf.find(v) != uf.find(g.other_end(e, v)))
          values[v] = std::min(values[v], pack(e));
    auto agg = partwise_aggregate(g, cfg, parts, shortcut_provider(parts),
                                  values, AggOp::Min);
    merge_trace(res.trace, agg.trace);

    // component roots flood the chosen edges through the global BFS tree
    std::vector<std::vector<std::int64_t>> records(g.n());
    std::set<EdgeId> chosen;
    for (NodeId r = 0; r < g.n(); ++r)
      if (comp_index[r] >= 0) {
        std::int64_t best = agg.value[comp_nodes[r].front()];
        if (best == agg_identity(AggOp::Min))
          throw SimError("component with no outgoing edge");
        EdgeId e = static_cast<EdgeId>(best & ((std::int64_t(1) << eid_bits) - 1));
        records[r].push_back(e);
        chosen.insert(e);
      }
    merge_trace(res.trace, run_gather(g, cfg, std::move(records)));

    for (EdgeId e : chosen) {
      auto [u, v] = g.edge(e);
      if (uf.unite(u, v)) mst.insert(e);
    }
    ++res.phases;
  }

  res.mst.assign(mst.begin(), mst.end());
  for (EdgeId e : res.mst) res.weight += weights[e];
  res.rounds = res.trace.rounds;
  res.trace.outputs.assign(g.n(), res.weight);
  res.trace.halt_round.assign(g.n(), res.trace.rounds);
  return res;
}

// ---- spanning connectivity ------------------------------------------------

namespace {

struct VerifyPlan {
  int bandwidth = 0;
  int n = 0;
  std::vector<std::vector<NodeId>> h_neigh;  // per node, via H edges
  std::vector<NodeId> parent;                // BFS tree of G rooted at 0
  std::vector<std::vector<NodeId>> children;
};

class VerifyProgram : public NodeProgram {
 public:
  explicit VerifyProgram(std::shared_ptr<const VerifyPlan> plan)
      : plan_(plan) {}

  void init(const NodeCtx& ctx) override {
    label_ = ctx.id;
    changed_ = true;
    pending_ = static_cast<int>(plan_->children[ctx.id].size());
  }

  void on_round(const NodeCtx& ctx, int round,
                const std::vector<Inbound>& inbox,
                std::vector<std::pair<NodeId, Message>>& out) override {
    for (const auto& in : inbox) {
      auto rec = complete_record(in.msg);
      if (!rec) continue;
      switch ((*rec)[0]) {
        case 0:
          if ((*rec)[1] < label_) {
            label_ = (*rec)[1];
            changed_ = true;
          }
          break;
        case 1:
          my_and_ &= static_cast<int>((*rec)[1]);
          --pending_;
          break;
        case 2:
          verdict_ = static_cast<int>((*rec)[1]);
          for (NodeId c : plan_->children[ctx.id])
            queues_.push(c, {2, verdict_}, plan_->bandwidth);
          break;
        default: throw SimError("unexpected verify record");
      }
    }
    // phase A: n rounds of min-label flooding over H
    if (round <= plan_->n && changed_) {
      for (NodeId w : plan_->h_neigh[ctx.id])
        queues_.push(w, {0, label_}, plan_->bandwidth);
      changed_ = false;
    }
    // phase B: AND(label == 0) up the tree, verdict back down
    if (round > plan_->n + 1 && !sent_up_ && pending_ == 0) {
      sent_up_ = true;
      my_and_ &= (label_ == 0) ? 1 : 0;
      if (plan_->parent[ctx.id] < 0) {
        verdict_ = my_and_;
        for (NodeId c : plan_->children[ctx.id])
          queues_.push(c, {2, verdict_}, plan_->bandwidth);
      } else {
        queues_.push(plan_->parent[ctx.id], {1, my_and_}, plan_->bandwidth);
      }
    }
    queues_.flush(plan_->bandwidth, out);
    if (verdict_ >= 0 && queues_.empty()) halt(verdict_);
  }

 private:
  std::shared_ptr<const VerifyPlan> plan_;
  NodeId label_ = 0;
  bool changed_ = false;
  bool sent_up_ = false;
  int pending_ = 0;
  int my_and_ = 1;
  int verdict_ = -1;
  OutQueues queues_;
};

}  // namespace

VerifyResult verify_spanning_connected(const Graph& g, const SimConfig& cfg,
                                       const std::vector<char>& h_indicator) {
  if (static_cast<int>(h_indicator.size()) != g.m())
    throw SimError("indicator size mismatch");
  auto plan = std::make_shared<VerifyPlan>();
  plan->bandwidth = cfg.bandwidth_for(g.n());
  plan->n = g.n();
  plan->h_neigh.resize(g.n());
  for (EdgeId e = 0; e < g.m(); ++e)
    if (h_indicator[e]) {
      auto [u, v] = g.edge(e);
      plan->h_neigh[u].push_back(v);
      plan->h_neigh[v].push_back(u);
    }
  auto gp = make_gather_plan(g, plan->bandwidth);
  plan->parent = gp.parent;
  plan->children = gp.children;

  VerifyResult res;
  res.trace = run(g, cfg, [&](NodeId) {
    return std::make_unique<VerifyProgram>(plan);
  });
  res.rounds = res.trace.rounds;
  res.outputs = res.trace.outputs;
  res.spanning_connected = res.trace.outputs[0] == 1;
  return res;
}

bool spanning_connected(const Graph& g, const std::vector<char>& h_indicator) {
  UnionFind uf(g.n());
  int comps = g.n();
  for (EdgeId e = 0; e < g.m(); ++e)
    if (h_indicator[e]) {
      auto [u, v] = g.edge(e);
      if (uf.unite(u, v)) --comps;
    }
  return comps == 1;
}

// ---- random delay routing -------------------------------------------------

RouteResult random_delay_route(const Graph& g, const SimConfig& cfg,
                               const PairShortcut& ps, int q,
                               int round_limit) {
  const int n = g.n();
  const int bandwidth = cfg.bandwidth_for(n);
  const int word = ceil_log2_int(std::max(n, 2));
  const int cap = std::max(1, bandwidth / word);
  if (q < 1) q = 1;
  if (round_limit <= 0) round_limit = cfg.round_cap;

  const int k = static_cast<int>(ps.paths.size());
  std::vector<int> pos(k, 0), delay(k);
  std::vector<int> delivered(k, 0);
  int undelivered = 0;
  for (int i = 0; i < k; ++i) {
    delay[i] = static_cast<int>(derive_seed(cfg.seed, 0xde1a, i) % q);
    if (ps.paths[i].length() == 0)
      delivered[i] = 1;
    else
      ++undelivered;
  }

  auto dir_of = [&](EdgeId e, NodeId tail) {
    return g.edge(e).first == tail ? 0 : 1;
  };
  std::map<std::pair<EdgeId, int>, std::deque<int>> queue;
  RouteResult res;
  res.trace.halt_round.assign(n, 0);
  res.trace.outputs.assign(n, 0);

  int round = 0;
  while (undelivered > 0) {
    ++round;
    if (round > round_limit) {
      res.all_delivered = false;
      res.completion_round = round_limit;
      res.trace.rounds = round_limit;
      return res;
    }
    for (int i = 0; i < k; ++i)  // ascending pair id resolves ties
      if (!delivered[i] && pos[i] == 0 && delay[i] + 1 == round) {
        const Walk& p = ps.paths[i];
        EdgeId e = *g.edge_id(p.nodes[0], p.nodes[1]);
        queue[{e, dir_of(e, p.nodes[0])}].push_back(i);
      }
    std::vector<int> movers;
    for (auto& [key, dq] : queue) {
      int sent = 0;
      std::uint64_t h = 0;
      while (!dq.empty() && sent < cap) {
        movers.push_back(dq.front());
        h = mix64(h ^ mix64(dq.front()));
        dq.pop_front();
        ++sent;
      }
      if (sent > 0)
        res.trace.entries.push_back(
            {round, key.first, key.second, sent * word, h});
    }
    std::sort(movers.begin(), movers.end());
    for (int i : movers) {
      const Walk& p = ps.paths[i];
      ++pos[i];
      if (pos[i] == p.length()) {
        delivered[i] = 1;
        --undelivered;
        res.trace.outputs[p.last()] += 1;
        res.completion_round = round;
      } else {
        EdgeId e = *g.edge_id(p.nodes[pos[i]], p.nodes[pos[i] + 1]);
        queue[{e, dir_of(e, p.nodes[pos[i]])}].push_back(i);
      }
    }
    int backlog = 0;
    for (auto& [key, dq] : queue) backlog += static_cast<int>(dq.size());
    res.max_queue = std::max(res.max_queue, backlog);
    res.trace.rounds = round;
  }
  res.all_delivered = true;
  res.trace.halt_round.assign(n, res.completion_round);
  return res;
}

PairProtoResult pairwise_shortcut_protocol(
    const Graph& g, const SimConfig& cfg, const PairSet& pairs,
    const std::function<RoutingScheme(int)>& scheme_family) {
  if (!cfg.supported)
    throw SimError("pairwise_shortcut_protocol needs supported mode");
  const int n = g.n();
  const int lg = ceil_log2_int(std::max(n, 2));
  const int d = diameter(g);

  PairProtoResult res;
  for (int h = 2;; h *= 2) {
    if (h >= n) {
      res.shortcut = bfs_pair_oracle(g, pairs);
      auto q = measure_pair_shortcut(g, pairs, res.shortcut);
      res.quality = q.quality();
      auto rr = random_delay_route(g, cfg, res.shortcut,
                                   std::max(res.quality, 1));
      res.rounds += rr.completion_round + d;
      res.final_h = h;
      res.fallback = true;
      return res;
    }
    RoutingScheme scheme;
    bool feasible = true;
    try {
      scheme = scheme_family(h);
      scheme.validate(g);
    } catch (const std::exception&) {
      feasible = false;
    }
    if (!feasible) {
      res.rounds += d;  // failure bit flood
      continue;
    }
    PairShortcut sample =
        sample_shortcuts(g, scheme, derive_seed(cfg.seed, 0x5a3e, h));
    auto q = measure_pair_shortcut(g, pairs, sample);
    int quality = std::max(q.quality(), 1);
    int limit = 8 * quality * lg;
    auto rr = random_delay_route(g, cfg, sample, quality, limit);
    res.rounds += (rr.all_delivered ? rr.completion_round : limit) + d;
    if (rr.all_delivered) {
      res.shortcut = std::move(sample);
      res.quality = quality;
      res.final_h = h;
      return res;
    }
  }
}

// ---- distributed shortcut construction ------------------------------------

ConstructionResult distributed_partwise_construction(
    const Graph& g, const SimConfig& cfg, const Partition& parts,
    const std::function<PairShortcut(const PairSet&)>& pairwise_proto) {
  parts.validate(g);
  const int lg = ceil_log2_int(std::max(g.n(), 2));
  const int cap = 12 * lg + 20;
  std::vector<int> in_part = parts.part_of(g);

  UnionFind uf(g.n());
  std::vector<std::set<EdgeId>> per_part(parts.k());
  ConstructionResult res;
  double rate_sum = 0;
  int rated_phases = 0;

  while (true) {
    // cluster roots per part; a part is live while it has >= 2 clusters
    std::vector<std::set<NodeId>> roots(parts.k());
    for (NodeId v = 0; v < g.n(); ++v)
      if (in_part[v] >= 0) roots[in_part[v]].insert(uf.find(v));
    int live = 0;
    for (int i = 0; i < parts.k(); ++i)
      if (roots[i].size() > 1) live += static_cast<int>(roots[i].size());
    if (live == 0) break;
    if (res.phases >= cap) {
      res.capped = true;
      res.surviving = live;
      break;
    }
    int phase = ++res.phases;
    res.cluster_counts.push_back(live);

    auto heads = [&](NodeId root) {
      return (derive_seed(cfg.seed, 0xc01, phase, root) & 1) == 1;
    };
    // tail clusters pick their lowest-root adjacent head cluster
    std::map<NodeId, NodeId> target;
    for (const auto& [u, v] : g.edges()) {
      if (in_part[u] < 0 || in_part[u] != in_part[v]) continue;
      NodeId a = uf.find(u), b = uf.find(v);
      if (a == b) continue;
      for (auto [tail, head] : {std::pair{a, b}, std::pair{b, a}}) {
        if (heads(tail) || !heads(head)) continue;
        auto it = target.find(tail);
        if (it == target.end() || head < it->second) target[tail] = head;
      }
    }
    PairSet merge_pairs;
    std::vector<int> merge_part;
    for (auto& [tail, head] : target) {
      merge_pairs.pairs.emplace_back(tail, head);
      merge_part.push_back(in_part[tail]);
    }
    int merged = static_cast<int>(merge_pairs.pairs.size());
    rate_sum += live > 0 ? double(merged) / live : 0;
    ++rated_phases;
    if (merged == 0) continue;

    PairShortcut ps = pairwise_proto(merge_pairs);
    if (static_cast<int>(ps.paths.size()) != merged)
      throw SimError("pairwise protocol returned a wrong path count");
    for (int j = 0; j < merged; ++j) {
      for (EdgeId e : ps.paths[j].edge_ids(g)) per_part[merge_part[j]].insert(e);
      auto [s, t] = merge_pairs.pairs[j];
      uf.unite(s, t);
    }
  }

  res.avg_merge_rate = rated_phases > 0 ? rate_sum / rated_phases : 1.0;
  res.shortcut.per_part.resize(parts.k());
  for (int i = 0; i < parts.k(); ++i)
    res.shortcut.per_part[i].assign(per_part[i].begin(), per_part[i].end());
  return res;
}

// ---- disjointness instances -----------------------------------------------

std::vector<char> build_disjointness_instance(const Graph& g,
                                              const StrictGadget& gadget,
                                              const std::vector<int>& x,
                                              const std::vector<int>& y) {
  const int k = static_cast<int>(gadget.paths.size());
  if (static_cast<int>(x.size()) != k || static_cast<int>(y.size()) != k)
    throw SimError("bit vector size mismatch");
  std::vector<char> ind(g.m(), 0);

  // H2: the gadget tree plus every path interior
  for (EdgeId e : gadget.tree_edges) ind[e] = 1;
  std::vector<std::vector<EdgeId>> path_eids(k);
  for (int i = 0; i < k; ++i) {
    path_eids[i] = gadget.paths[i].edge_ids(g);
    for (size_t j = 1; j + 1 < path_eids[i].size(); ++j)
      ind[path_eids[i][j]] = 1;
  }

  // H1: spanning tree of the graph with the whole gadget contracted
  UnionFind uf(g.n());
  for (EdgeId e : gadget.tree_edges) uf.unite(g.edge(e).first, g.edge(e).second);
  for (int i = 0; i < k; ++i)
    for (EdgeId e : path_eids[i]) uf.unite(g.edge(e).first, g.edge(e).second);
  for (EdgeId e = 0; e < g.m(); ++e)
    if (uf.unite(g.edge(e).first, g.edge(e).second)) ind[e] = 1;

  // H3: endpoint edges gated by the input bits
  for (int i = 0; i < k; ++i) {
    if (x[i] == 0) ind[path_eids[i].front()] = 1;
    if (y[i] == 0) ind[path_eids[i].back()] = 1;
  }
  return ind;
}

// ---- two-party extraction -------------------------------------------------

TwoPartyExtraction extract_two_party_protocol(const Trace& trace,
                                              const Graph& g,
                                              const MovingCut& mc,
                                              const PairSet& s,
                                              int bandwidth) {
  const std::int64_t beta = cut_distance(g, mc, s);
  const std::int64_t bigt = trace.rounds;
  if (2 * bigt > beta)
    throw SimError("hypothesis violated: trace has " + std::to_string(bigt) +
                   " rounds but the cut distance is only " +
                   std::to_string(beta));
  auto dist = ell_distances(g, mc.ell, s.sources());

  TwoPartyExtraction res;
  res.bound = 2 * std::int64_t(bandwidth) * cut_capacity(mc);
  // distinct cross-active rounds per (edge, dir), to check the ell_e - 1 cap
  std::map<std::pair<EdgeId, int>, std::set<int>> active;
  for (const auto& e : trace.entries) {
    auto [a, b] = g.edge(e.edge);
    NodeId v = e.dir == 0 ? a : b;  // tail
    NodeId w = e.dir == 0 ? b : a;
    std::int64_t t0 = e.round - 1;
    bool cross = false;
    if (dist[w] > dist[v] && t0 >= dist[v] && t0 <= dist[w] - 2) {
      res.alice_bits += e.bits;  // climbing away from the sources
      cross = true;
    } else if (dist[v] > dist[w] && t0 >= 2 * bigt - dist[v] &&
               t0 <= 2 * bigt - dist[w] - 2) {
      res.bob_bits += e.bits;
      cross = true;
    }
    if (cross) {
      res.transcript.push_back(e);
      active[{e.edge, e.dir}].insert(e.round);
    }
  }
  for (const auto& [key, rounds] : active)
    if (static_cast<std::int64_t>(rounds.size()) > mc.ell[key.first] - 1)
      ++res.active_round_violations;
  return res;
}

// ---- diameter floors ------------------------------------------------------

namespace {

// First round where the observer's incoming trace entries differ.
int first_inbox_difference(const Graph& g, const Trace& a, const Trace& b,
                           NodeId observer) {
  auto inbound = [&](const Trace& t) {
    std::map<int, std::vector<std::tuple<EdgeId, int, int, std::uint64_t>>> r;
    for (const auto& e : t.entries) {
      auto [u, v] = g.edge(e.edge);
      NodeId head = e.dir == 0 ? v : u;
      if (head == observer)
        r[e.round].emplace_back(e.edge, e.dir, e.bits, e.payload_hash);
    }
    return r;
  };
  auto ra = inbound(a), rb = inbound(b);
  int last = std::max(a.rounds, b.rounds);
  for (int t = 1; t <= last; ++t) {
    auto ia = ra.find(t), ib = rb.find(t);
    bool ea = ia == ra.end(), eb = ib == rb.end();
    if (ea != eb || (!ea && ia->second != ib->second)) return t;
  }
  return last + 1;
}

}  // namespace

DiameterFloorReport diameter_floor_checks(const Graph& g,
                                          const SimConfig& cfg) {
  DiameterFloorReport report;
  const int d = diameter(g);

  {  // connectivity pair: BFS spanning tree vs the same tree minus the far
     // leaf edge; the observer sits at the other end of a double sweep
    auto d0 = bfs_distances(g, 0);
    NodeId a = static_cast<NodeId>(
        std::max_element(d0.begin(), d0.end()) - d0.begin());
    auto da = bfs_distances(g, a);
    NodeId b = static_cast<NodeId>(
        std::max_element(da.begin(), da.end()) - da.begin());
    int dist_ab = da[b];

    std::vector<NodeId> parent(g.n(), -1);
    {
      std::vector<char> seen(g.n(), 0);
      seen[b] = 1;
      std::deque<NodeId> bfs{b};
      while (!bfs.empty()) {
        NodeId v = bfs.front();
        bfs.pop_front();
        for (NodeId w : g.neighbors(v))
          if (!seen[w]) {
            seen[w] = 1;
            parent[w] = v;
            bfs.push_back(w);
          }
      }
    }
    std::vector<char> h0(g.m(), 0);
    for (NodeId v = 0; v < g.n(); ++v)
      if (parent[v] >= 0) h0[*g.edge_id(v, parent[v])] = 1;
    std::vector<char> h1 = h0;
    h1[*g.edge_id(a, parent[a])] = 0;  // a is deepest, hence a tree leaf

    auto ra = verify_spanning_connected(g, cfg, h0);
    auto rb = verify_spanning_connected(g, cfg, h1);
    DiameterFloorReport::Row row;
    row.check = "connectivity";
    row.diameter = d;
    row.bound = dist_ab - 1;
    row.first_diff_round = first_inbox_difference(g, ra.trace, rb.trace, b);
    row.outputs_differ =
        ra.spanning_connected && !rb.spanning_connected;
    row.ok = row.outputs_differ && row.first_diff_round >= row.bound;
    report.rows.push_back(row);
  }

  {  // MST weight pair on an even cycle: raising one far edge to weight 2
     // flips which edge the observer keeps
    int nc = std::max(8, 2 * (d + 1));
    Graph cyc = gen_cycle(nc);
    int dc = nc / 2;
    NodeId observer = nc - 1;
    EdgeId far = *cyc.edge_id(dc - 1, dc);
    std::vector<std::int64_t> w1(cyc.m(), 1), w2(cyc.m(), 1);
    w2[far] = 2;
    SimConfig sub = cfg;
    sub.supported = true;
    auto provider = [&](const Partition& p) {
      Shortcut sc;
      sc.per_part.resize(p.k());
      return sc;
    };
    auto ma = boruvka_mst(cyc, sub, w1, provider);
    auto mb = boruvka_mst(cyc, sub, w2, provider);
    auto incident = [&](const MstResult& m) {
      std::vector<EdgeId> inc;
      for (EdgeId e : m.mst) {
        auto [u, v] = cyc.edge(e);
        if (u == observer || v == observer) inc.push_back(e);
      }
      return inc;
    };
    DiameterFloorReport::Row row;
    row.check = "mst";
    row.diameter = dc;
    row.bound = (dc + 1) / 2 - 1;
    row.first_diff_round =
        first_inbox_difference(cyc, ma.trace, mb.trace, observer);
    row.outputs_differ = incident(ma) != incident(mb);
    row.ok = row.outputs_differ && row.first_diff_round >= row.bound;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace shortcutlab
