#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "shortcutlab/gadget.hpp"
#include "shortcutlab/graph.hpp"
#include "shortcutlab/moving_cut.hpp"
#include "shortcutlab/partition.hpp"
#include "shortcutlab/routing.hpp"

namespace shortcutlab {

class SimError : public std::runtime_error {
 public:
  explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

/// Synchronous message-passing simulator. One round: every active node sees
/// the messages sent to it in the previous round, updates its state, and
/// queues sends for the next round. Per edge, per direction, per round the
/// declared bit total must stay within the bandwidth budget.
struct SimConfig {
  int bandwidth_bits = 0;  // 0 selects the default ceil(4 log2 n)
  bool supported = false;  // supported CONGEST: programs may read all of G
  std::uint64_t seed = 0;
  int round_cap = 200000;

  int bandwidth_for(int n) const;
};

/// A message carries decoded words for programmatic convenience; `bits` is
/// the binding cost declaration. Programs should declare at least
/// payload_bits(words) unless the message is a fragment of a larger record
/// whose total cost is split across rounds.
struct Message {
  std::vector<std::int64_t> words;
  int bits = 0;
};

int payload_bits(const std::vector<std::int64_t>& words);
Message make_message(std::vector<std::int64_t> words);

struct Inbound {
  NodeId from;
  Message msg;
};

struct NodeCtx {
  NodeId id = 0;
  int n = 0;
  int diameter = 0;
  const Graph* graph = nullptr;  // null outside supported mode
  const std::vector<int>* neighbors = nullptr;
  std::uint64_t seed = 0;

  // node-local randomness stream
  std::uint64_t coin(std::uint64_t round, std::uint64_t salt = 0) const;
  // shared randomness: identical at every node
  std::uint64_t shared_coin(std::uint64_t round, std::uint64_t salt = 0) const;
};

class NodeProgram {
 public:
  virtual ~NodeProgram() = default;
  virtual void init(const NodeCtx&) {}
  // inbox: messages sent to this node in the previous round, ordered by
  // sender id. out: (neighbor id, message) sends for this round.
  virtual void on_round(const NodeCtx& ctx, int round,
                        const std::vector<Inbound>& inbox,
                        std::vector<std::pair<NodeId, Message>>& out) = 0;
  bool halted() const { return halted_; }
  std::int64_t output() const { return output_; }

 protected:
  void halt(std::int64_t out) {
    halted_ = true;
    output_ = out;
  }

 private:
  bool halted_ = false;
  std::int64_t output_ = 0;
};

struct TraceEntry {
  int round = 0;
  EdgeId edge = 0;
  int dir = 0;  // 0: lower endpoint -> higher, 1: the reverse
  int bits = 0;
  std::uint64_t payload_hash = 0;
};

struct Trace {
  std::vector<TraceEntry> entries;  // canonical (round, edge, dir) order
  std::vector<std::int64_t> outputs;
  std::vector<int> halt_round;  // per node
  int rounds = 0;               // rounds simulated until global halt
};

using ProgramFactory = std::function<std::unique_ptr<NodeProgram>(NodeId)>;

Trace run(const Graph& g, const SimConfig& cfg, const ProgramFactory& make);

// JSON-lines export, one record per (round, edge, dir).
void write_trace_jsonl(const std::string& path, const Graph& g,
                       const Trace& t);

// ---- distributed algorithms ----------------------------------------------

enum class AggOp { Min, Max, Sum };

struct AggregateResult {
  std::vector<std::int64_t> value;  // per node; identity where no part holds
  Trace trace;
  int congestion = 0;  // of the shortcut used
  int dilation = 0;
};

// Convergecast + broadcast on a BFS tree of each part's augmented subgraph
// (supported mode). Every node of P_i ends with op over P_i's values.
AggregateResult partwise_aggregate(const Graph& g, const SimConfig& cfg,
                                   const Partition& parts, const Shortcut& sc,
                                   const std::vector<std::int64_t>& values,
                                   AggOp op);

std::int64_t agg_identity(AggOp op);

struct MstResult {
  std::vector<EdgeId> mst;   // sorted
  std::int64_t weight = 0;
  int phases = 0;
  int rounds = 0;  // total simulated rounds across phases
  Trace trace;     // merged, globally numbered rounds
};

// Boruvka phases of partwise aggregation over current components plus a
// global gather/broadcast of the chosen edges. Ties by edge id.
MstResult boruvka_mst(
    const Graph& g, const SimConfig& cfg,
    const std::vector<std::int64_t>& weights,
    const std::function<Shortcut(const Partition&)>& shortcut_provider);

struct VerifyResult {
  bool spanning_connected = false;
  int rounds = 0;
  Trace trace;
  std::vector<std::int64_t> outputs;  // per node bit
};

// Label propagation over H plus a global AND; every node outputs the verdict.
VerifyResult verify_spanning_connected(const Graph& g, const SimConfig& cfg,
                                       const std::vector<char>& h_indicator);

// ---- routing protocols ----------------------------------------------------

struct RouteResult {
  Trace trace;
  int completion_round = 0;
  bool all_delivered = false;
  int max_queue = 0;
};

// One token per pair along its fixed path, uniform start delay in [0, q),
// per edge/direction/round at most max(1, bandwidth / ceil(log2 n)) tokens,
// FIFO overflow queues with ties by pair id.
RouteResult random_delay_route(const Graph& g, const SimConfig& cfg,
                               const PairShortcut& ps, int q,
                               int round_limit = 0);

struct PairProtoResult {
  PairShortcut shortcut;
  int rounds = 0;  // total simulated rounds across doubling steps
  int final_h = 0;
  int quality = 0;  // c + d of the returned shortcut
  bool fallback = false;
};

// Doubling loop: per h, sample one path per pair from the h-hop scheme with
// shared coins, attempt random-delay delivery within 8 q ceil(log2 n)
// rounds, flood the failure bit (D rounds), stop at the first success;
// falls back to BFS paths once h reaches n.
PairProtoResult pairwise_shortcut_protocol(
    const Graph& g, const SimConfig& cfg, const PairSet& pairs,
    const std::function<RoutingScheme(int)>& scheme_family);

struct ConstructionResult {
  Shortcut shortcut;
  int phases = 0;
  double avg_merge_rate = 0;            // merged clusters / clusters, averaged
  std::vector<int> cluster_counts;      // per phase, before merging
  bool capped = false;
  int surviving = 0;  // clusters left when capped
};

// Cluster-merging shortcut construction, simulated at phase granularity:
// per phase each cluster flips a shared head/tail coin, tail clusters merge
// into their lowest-root adjacent head cluster, and each merge routes a
// root-to-root connection through pairwise_proto whose path edges join the
// part's shortcut.
ConstructionResult distributed_partwise_construction(
    const Graph& g, const SimConfig& cfg, const Partition& parts,
    const std::function<PairShortcut(const PairSet&)>& pairwise_proto);

// ---- lower-bound machinery ------------------------------------------------

// H = H1 (spanning tree of the contracted graph) + H2 (gadget tree and path
// interiors) + H3 (endpoint edges gated by the input bits): connected iff
// the bit vectors are disjoint.
std::vector<char> build_disjointness_instance(const Graph& g,
                                              const StrictGadget& gadget,
                                              const std::vector<int>& x,
                                              const std::vector<int>& y);

// Union-find connectivity of the indicated subgraph over all n nodes.
bool spanning_connected(const Graph& g, const std::vector<char>& h_indicator);

struct TwoPartyExtraction {
  std::int64_t alice_bits = 0;  // source-side to sink-side transfer
  std::int64_t bob_bits = 0;
  std::int64_t bound = 0;  // 2 * bandwidth * capacity
  int active_round_violations = 0;  // per-edge active rounds above ell - 1
  std::vector<TraceEntry> transcript;
};

// Replays a T-round trace (2T <= cut distance required) and tallies the
// bits that must cross between the two simulating parties: a message v->w
// at round t crosses when t sits inside the distance window of its
// direction, which spans at most ell_e - 1 rounds.
TwoPartyExtraction extract_two_party_protocol(const Trace& trace,
                                              const Graph& g,
                                              const MovingCut& mc,
                                              const PairSet& s, int bandwidth);

struct DiameterFloorReport {
  struct Row {
    std::string check;
    int diameter = 0;
    int first_diff_round = 0;  // first round the observer's inbox differs
    int bound = 0;
    bool outputs_differ = false;
    bool ok = false;
  };
  std::vector<Row> rows;
};

// Paired-instance information-propagation floors: a connectivity pair on g
// (spanning tree vs one far leaf edge removed) and an MST weight pair on an
// even cycle; asserts the observer cannot distinguish them early.
DiameterFloorReport diameter_floor_checks(const Graph& g,
                                          const SimConfig& cfg);

}  // namespace shortcutlab
