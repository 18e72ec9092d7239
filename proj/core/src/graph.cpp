#include "dado/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

namespace dado {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ShortestPathTree dijkstra(const ScenarioIndex& ix, int src,
                          std::span<const double> link_weight) {
  const int n = ix.num_nodes();
  ShortestPathTree tree;
  tree.dist.assign(n, kInf);
  tree.pred_link.assign(n, -1);
  tree.dist[src] = 0.0;

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.push({0.0, src});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > tree.dist[u]) continue;
    for (int l : ix.out_links(u)) {
      int v = ix.link(l).dst;
      double nd = d + link_weight[l];
      // strict improvement keeps the predecessor choice deterministic:
      // the first-seen (lowest link index) path wins among equals
      if (nd < tree.dist[v]) {
        tree.dist[v] = nd;
        tree.pred_link[v] = l;
        heap.push({nd, v});
      }
    }
  }
  return tree;
}

std::vector<int> path_links(const ScenarioIndex& ix, const ShortestPathTree& tree,
                            int src, int dst) {
  std::vector<int> links;
  if (src == dst) return links;
  if (tree.dist[dst] == kInf)
    throw std::runtime_error("no path between the requested nodes");
  int u = dst;
  while (u != src) {
    int l = tree.pred_link[u];
    links.push_back(l);
    u = ix.link(l).src;
  }
  std::reverse(links.begin(), links.end());
  return links;
}

double path_cost(const ScenarioIndex& ix, std::span<const int> links,
                 std::span<const double> link_weight) {
  (void)ix;
  double c = 0.0;
  for (int l : links) c += link_weight[l];
  return c;
}

namespace {

// Dijkstra restricted to enabled nodes/links; used by Yen's spur search.
ShortestPathTree dijkstra_masked(const ScenarioIndex& ix, int src,
                                 std::span<const double> link_weight,
                                 const std::vector<char>& node_banned,
                                 const std::set<int>& link_banned) {
  const int n = ix.num_nodes();
  ShortestPathTree tree;
  tree.dist.assign(n, kInf);
  tree.pred_link.assign(n, -1);
  if (node_banned[src]) return tree;
  tree.dist[src] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.push({0.0, src});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > tree.dist[u]) continue;
    for (int l : ix.out_links(u)) {
      if (link_banned.count(l)) continue;
      int v = ix.link(l).dst;
      if (node_banned[v]) continue;
      double nd = d + link_weight[l];
      if (nd < tree.dist[v]) {
        tree.dist[v] = nd;
        tree.pred_link[v] = l;
        heap.push({nd, v});
      }
    }
  }
  return tree;
}

std::vector<int> path_nodes(const ScenarioIndex& ix, int src,
                            const std::vector<int>& links) {
  std::vector<int> nodes{src};
  for (int l : links) nodes.push_back(ix.link(l).dst);
  return nodes;
}

}  // namespace

std::vector<std::vector<int>> k_shortest_paths(const ScenarioIndex& ix, int src,
                                               int dst, int k,
                                               std::span<const double> link_weight) {
  std::vector<std::vector<int>> result;
  if (k <= 0 || src == dst) return result;

  auto tree = dijkstra(ix, src, link_weight);
  if (tree.dist[dst] == kInf) return result;
  result.push_back(path_links(ix, tree, src, dst));

  // candidate set ordered by (cost, links) for deterministic extraction
  auto cmp = [&](const std::pair<double, std::vector<int>>& a,
                 const std::pair<double, std::vector<int>>& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  };
  std::set<std::pair<double, std::vector<int>>, decltype(cmp)> candidates(cmp);

  while (static_cast<int>(result.size()) < k) {
    const std::vector<int>& prev = result.back();
    std::vector<int> prev_nodes = path_nodes(ix, src, prev);

    for (size_t i = 0; i < prev.size(); ++i) {
      int spur_node = prev_nodes[i];
      std::vector<int> root(prev.begin(), prev.begin() + i);

      std::set<int> banned_links;
      for (const auto& p : result) {
        if (p.size() > i && std::equal(root.begin(), root.end(), p.begin()))
          banned_links.insert(p[i]);
      }
      std::vector<char> banned_nodes(ix.num_nodes(), 0);
      for (size_t j = 0; j < i; ++j) banned_nodes[prev_nodes[j]] = 1;

      auto spur_tree = dijkstra_masked(ix, spur_node, link_weight, banned_nodes,
                                       banned_links);
      if (spur_tree.dist[dst] == kInf) continue;
      std::vector<int> total = root;
      auto spur = path_links(ix, spur_tree, spur_node, dst);
      total.insert(total.end(), spur.begin(), spur.end());
      candidates.insert({path_cost(ix, total, link_weight), std::move(total)});
    }

    if (candidates.empty()) break;
    auto best = candidates.begin();
    if (std::find(result.begin(), result.end(), best->second) == result.end())
      result.push_back(best->second);
    candidates.erase(best);
  }
  return result;
}

namespace {

void simple_paths_dfs(const ScenarioIndex& ix, int u, int dst,
                      std::vector<char>& on_path, std::vector<int>& links,
                      std::vector<std::vector<int>>& out, size_t limit) {
  if (out.size() >= limit) return;
  if (u == dst) {
    out.push_back(links);
    return;
  }
  for (int l : ix.out_links(u)) {
    int v = ix.link(l).dst;
    if (on_path[v]) continue;
    on_path[v] = 1;
    links.push_back(l);
    simple_paths_dfs(ix, v, dst, on_path, links, out, limit);
    links.pop_back();
    on_path[v] = 0;
    if (out.size() >= limit) return;
  }
}

}  // namespace

std::vector<std::vector<int>> all_simple_paths(const ScenarioIndex& ix, int src,
                                               int dst, size_t limit) {
  std::vector<std::vector<int>> out;
  if (src == dst) return out;
  std::vector<char> on_path(ix.num_nodes(), 0);
  on_path[src] = 1;
  std::vector<int> links;
  simple_paths_dfs(ix, src, dst, on_path, links, out, limit);
  return out;
}

}  // namespace dado
