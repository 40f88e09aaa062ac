#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mcc/code.hpp"
#include "mcc/noisesim.hpp"

namespace mcc {

enum class Weighting { probability, unit };

// Space-time graph over (unfolded node, round) with one shared boundary node.
struct MatchingGraph {
  struct Edge {
    int u, v;
    int64_t w;
    double p;          // aggregated first-order probability, 0 if none
    int correction;    // unfolded edge id, -1 for time edges
  };
  int nodes_per_round = 0;
  int layers = 0;      // rounds + 1
  int boundary = 0;    // node index of the boundary
  std::vector<Edge> edges;
  std::vector<int> adj_start, adj;  // CSR over edge ids
  UnfoldedGraph unfolded;
  int node(int unfolded_node, int round) const { return round * nodes_per_round + unfolded_node; }
  int num_nodes() const { return boundary + 1; }
};

// Blue detection events are corrected on the square's lower-left mode; red and
// green outcomes containing that mode are flipped from that round on and blue
// outcomes are cleared.
std::pair<SyndromeHistory, Bits> blue_step(const SyndromeHistory& h, const CodeLayout& layout);

// Fault classes of the first-order fault enumeration, for diagnostics.
struct FaultClassSummary {
  double space = 0, time = 0, diagonal = 0, boundary = 0, silent = 0, other = 0;
};

MatchingGraph build_matching_graph(const CodeLayout& layout, const Schedule& schedule, int rounds,
                                   const ErrorParams& params, Weighting weighting = Weighting::probability,
                                   FaultClassSummary* summary = nullptr);

struct Pairing {
  std::vector<std::pair<int, int>> pairs;  // event indices, second = -1 for boundary
  std::vector<std::vector<int>> paths;     // graph edge ids per pair
  int64_t weight = 0;
};

// Events are graph node indices.
Pairing mwpm(const MatchingGraph& g, const std::vector<int>& events);

struct DecodeOutcome {
  Bits correction;
  Bits residual;
  bool syndrome_clean = true;
  bool logical_failure = false;
  int64_t matching_weight = 0;
};

class Decoder {
 public:
  Decoder(const CodeLayout& layout, int rounds, const ErrorParams& params,
          Weighting weighting = Weighting::probability);
  DecodeOutcome decode(const SyndromeHistory& h) const;
  const MatchingGraph& graph() const { return graph_; }
  const Schedule& schedule() const { return schedule_; }

 private:
  const CodeLayout& layout_;
  Schedule schedule_;
  MatchingGraph graph_;
};

DecodeOutcome decode(const SyndromeHistory& h, const CodeLayout& layout, const ErrorParams& params);

}  // namespace mcc
