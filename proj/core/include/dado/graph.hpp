#pragma once
// Shortest-path machinery over a scenario's link graph. Weights are passed
// per link so callers can route on raw latency or on adjusted weights.

#include <span>
#include <vector>

#include "dado/infra.hpp"

namespace dado {

struct ShortestPathTree {
  std::vector<double> dist;       // per node; +inf when unreachable
  std::vector<int> pred_link;     // per node; link used to enter it, -1 at source
};

ShortestPathTree dijkstra(const ScenarioIndex& ix, int src,
                          std::span<const double> link_weight);

// Link sequence src -> dst from a predecessor tree; empty when src == dst.
// Throws std::runtime_error if dst is unreachable.
std::vector<int> path_links(const ScenarioIndex& ix, const ShortestPathTree& tree,
                            int src, int dst);

double path_cost(const ScenarioIndex& ix, std::span<const int> links,
                 std::span<const double> link_weight);

// Up to k loopless shortest paths (Yen), cheapest first. Each path is a link
// sequence. Returns fewer than k when the graph runs out of alternatives.
std::vector<std::vector<int>> k_shortest_paths(const ScenarioIndex& ix, int src,
                                               int dst, int k,
                                               std::span<const double> link_weight);

// Every simple path src -> dst as link sequences, aborting once `limit`
// paths were found (guards against combinatorial blow-up on dense graphs).
std::vector<std::vector<int>> all_simple_paths(const ScenarioIndex& ix, int src,
                                               int dst, size_t limit);

}  // namespace dado
