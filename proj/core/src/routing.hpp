#pragma once
// Internal machinery shared by the structured solver backends and the
// baseline strategies: precomputed shortest paths, control-plane planning,
// and capacity-checked evaluation of complete placements.

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dado/graph.hpp"
#include "dado/model.hpp"
#include "dado/solver.hpp"

namespace dado::detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SolveContext {
  const ModelIR* model = nullptr;

  std::vector<int> hosts_by_id;     // host indices sorted by id string
  std::vector<int> switches_by_id;  // switch indices sorted by id string
  std::vector<int> host_rank;       // host index -> position in hosts_by_id
  std::vector<int> switch_rank;

  std::vector<double> delta;             // per-link latency
  std::vector<ShortestPathTree> dtree;   // per source node, over delta

  std::vector<int64_t> slot_ram;     // memory demand per slot
  std::vector<double> slot_input;    // hop demand bytes per slot
  std::vector<double> wf_output;     // response demand bytes per workflow
  int64_t total_ram_demand = 0;
  int64_t total_ram_capacity = 0;

  // exec_cost[slot * H + h]: seconds, or +inf when h cannot take the slot
  // (no compute power, or the microservice alone exceeds the host's memory)
  std::vector<double> exec_cost;

  const ScenarioIndex& ix() const { return model->index; }
  double exec(int slot, int h) const { return exec_cost[slot * ix().num_hosts() + h]; }
};

SolveContext make_context(const ModelIR& m);

struct ControlPlan {
  std::vector<int> placed;                 // switch indices, ascending id order
  std::vector<int> controller_of;          // per switch
  std::vector<std::vector<int>> cf_links;  // per switch, to its controller
  std::vector<double> ctrl_latency;        // per switch
  bool feasible = true;
};

// Maps every switch to the latency-nearest placed controller (smallest id
// wins ties) and routes its control flow over the shortest latency path.
ControlPlan plan_control(const SolveContext& ctx, const std::vector<int>& placed);

// Link weights routing actually optimizes against: latency, plus the head
// switch's control-path latency in per-hop charge mode.
struct EffGraph {
  std::vector<double> weight;
  std::vector<ShortestPathTree> tree;  // per source node
  double dist(int u, int v) const { return tree[u].dist[v]; }
};

EffGraph make_eff_graph(const SolveContext& ctx, const ControlPlan& plan);

struct RoutedCommodity {
  bool is_response = false;
  int h = -1;     // generating host (variable subscript)
  int slot = -1;  // hop commodities
  int w = -1;
  int src = -1, dst = -1;  // nodes
  double demand_bytes = 0.0;
  std::vector<int> links;
};

struct PlacementEval {
  bool feasible = false;
  bool exact = false;  // no capacity repair was needed
  double objective = kInf;
  double exec_s = 0.0, net_s = 0.0, ctrl_s = 0.0;
  std::vector<RoutedCommodity> commodities;
  std::vector<std::vector<int>> cf_links;  // possibly rerouted copy of the plan's
  std::vector<double> ctrl_latency;
};

bool memory_ok(const SolveContext& ctx, std::span<const int> host_of_slot);

// Routes every demanded commodity for the placement over the effective
// graph, checks link capacities, and falls back to k-shortest rerouting on
// overload. `exact` stays true only when no reroute was needed.
PlacementEval evaluate_placement(const SolveContext& ctx, const ControlPlan& plan,
                                 const EffGraph& eff,
                                 std::span<const int> host_of_slot,
                                 int reroute_k = 8);

// Builds the dense assignment for a feasible evaluation and cross-checks it
// against the model rows and objective (throws std::logic_error on any
// disagreement beyond tolerance).
DeploymentSolution assemble_solution(const SolveContext& ctx, const ControlPlan& plan,
                                     const PlacementEval& eval,
                                     std::span<const int> host_of_slot,
                                     SolveStatus status, std::string solver,
                                     double wall_time_s, double best_bound);

// Nonempty switch subsets of size <= max_size in lexicographic order over
// the id-sorted switch sequence.
std::vector<std::vector<int>> controller_subsets(const SolveContext& ctx, int max_size);

// Lexicographic tie-break key: slot host ranks, placed switch ranks, then
// per-switch controller ranks.
std::vector<int> solution_key(const SolveContext& ctx, std::span<const int> host_of_slot,
                              const ControlPlan& plan);

}  // namespace dado::detail
