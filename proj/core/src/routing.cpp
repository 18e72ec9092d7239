#include "routing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dado/scenario_io.hpp"

namespace dado::detail {

SolveContext make_context(const ModelIR& m) {
  SolveContext ctx;
  ctx.model = &m;
  const ScenarioIndex& ix = m.index;
  const Scenario& sc = ix.scenario();
  const int H = ix.num_hosts();
  const int S = ix.num_switches();

  ctx.hosts_by_id.resize(H);
  std::iota(ctx.hosts_by_id.begin(), ctx.hosts_by_id.end(), 0);
  std::sort(ctx.hosts_by_id.begin(), ctx.hosts_by_id.end(),
            [&](int a, int b) { return sc.hosts[a].id < sc.hosts[b].id; });
  ctx.host_rank.resize(H);
  for (int r = 0; r < H; ++r) ctx.host_rank[ctx.hosts_by_id[r]] = r;

  ctx.switches_by_id.resize(S);
  std::iota(ctx.switches_by_id.begin(), ctx.switches_by_id.end(), 0);
  std::sort(ctx.switches_by_id.begin(), ctx.switches_by_id.end(),
            [&](int a, int b) { return sc.switches[a].id < sc.switches[b].id; });
  ctx.switch_rank.resize(S);
  for (int r = 0; r < S; ++r) ctx.switch_rank[ctx.switches_by_id[r]] = r;

  ctx.delta.resize(ix.num_links());
  for (int l = 0; l < ix.num_links(); ++l) ctx.delta[l] = ix.link(l).latency_s;
  ctx.dtree.reserve(ix.num_nodes());
  for (int v = 0; v < ix.num_nodes(); ++v)
    ctx.dtree.push_back(dijkstra(ix, v, ctx.delta));

  ctx.slot_ram.resize(ix.num_slots());
  ctx.slot_input.resize(ix.num_slots());
  for (int slot = 0; slot < ix.num_slots(); ++slot) {
    const Microservice& ms = ix.microservice(ix.slot_microservice(slot));
    ctx.slot_ram[slot] = ms.ram_bytes;
    ctx.slot_input[slot] = static_cast<double>(ms.input_bytes);
    ctx.total_ram_demand += ms.ram_bytes;
  }
  ctx.wf_output.resize(ix.num_workflows());
  for (int w = 0; w < ix.num_workflows(); ++w) {
    int last = ix.slot_microservice(ix.slot(w, ix.workflow_len(w) - 1));
    ctx.wf_output[w] = static_cast<double>(ix.microservice(last).output_bytes);
  }
  for (int h = 0; h < H; ++h) ctx.total_ram_capacity += ix.host_ram_bytes(h);

  ctx.exec_cost.assign(static_cast<size_t>(ix.num_slots()) * H, kInf);
  for (int slot = 0; slot < ix.num_slots(); ++slot) {
    const Microservice& ms = ix.microservice(ix.slot_microservice(slot));
    for (int h = 0; h < H; ++h) {
      if (ix.host_cpu_hz(h) <= 0) continue;
      if (ms.ram_bytes > ix.host_ram_bytes(h)) continue;
      ctx.exec_cost[slot * H + h] = static_cast<double>(ms.workload_cycles) /
                                    static_cast<double>(ix.host_cpu_hz(h));
    }
  }
  return ctx;
}

ControlPlan plan_control(const SolveContext& ctx, const std::vector<int>& placed) {
  const ScenarioIndex& ix = ctx.ix();
  const int S = ix.num_switches();
  ControlPlan plan;
  plan.placed = placed;
  std::sort(plan.placed.begin(), plan.placed.end(),
            [&](int a, int b) { return ctx.switch_rank[a] < ctx.switch_rank[b]; });
  plan.controller_of.assign(S, -1);
  plan.cf_links.resize(S);
  plan.ctrl_latency.assign(S, 0.0);
  if (S == 0) return plan;
  if (plan.placed.empty()) {
    plan.feasible = false;
    return plan;
  }
  for (int s = 0; s < S; ++s) {
    const int s_node = ix.switch_node(s);
    int best = -1;
    double best_d = kInf;
    // placed is rank-sorted, so strict improvement keeps the smallest id
    // among equidistant controllers
    for (int t : plan.placed) {
      double d = ctx.dtree[s_node].dist[ix.switch_node(t)];
      if (d < best_d) {
        best = t;
        best_d = d;
      }
    }
    if (best < 0 || best_d == kInf) {
      plan.feasible = false;
      return plan;
    }
    plan.controller_of[s] = best;
    plan.cf_links[s] = path_links(ix, ctx.dtree[s_node], s_node, ix.switch_node(best));
    plan.ctrl_latency[s] = best_d;
  }
  return plan;
}

EffGraph make_eff_graph(const SolveContext& ctx, const ControlPlan& plan) {
  const ScenarioIndex& ix = ctx.ix();
  EffGraph eff;
  eff.weight = ctx.delta;
  if (ctx.model->options.control_charge == ControlChargeMode::per_hop) {
    for (int l = 0; l < ix.num_links(); ++l) {
      int dst = ix.link(l).dst;
      if (ix.node_is_switch(dst))
        eff.weight[l] += plan.ctrl_latency[ix.node_switch(dst)];
    }
  }
  eff.tree.reserve(ix.num_nodes());
  for (int v = 0; v < ix.num_nodes(); ++v)
    eff.tree.push_back(dijkstra(ix, v, eff.weight));
  return eff;
}

bool memory_ok(const SolveContext& ctx, std::span<const int> host_of_slot) {
  const ScenarioIndex& ix = ctx.ix();
  std::vector<int64_t> used(ix.num_hosts(), 0);
  for (int slot = 0; slot < ix.num_slots(); ++slot) {
    int h = host_of_slot[slot];
    used[h] += ctx.slot_ram[slot];
    if (used[h] > ix.host_ram_bytes(h)) return false;
  }
  return true;
}

namespace {

struct LoadState {
  std::vector<double> load;      // bytes per link
  const ScenarioIndex* ix;
  double worst_violation(int* link_out = nullptr) const {
    double worst = 0.0;
    for (size_t l = 0; l < load.size(); ++l) {
      double v = load[l] - ix->link(static_cast<int>(l)).capacity_bps;
      if (v > worst) {
        worst = v;
        if (link_out) *link_out = static_cast<int>(l);
      }
    }
    return worst;
  }
};

constexpr double kCapacityTol = 1e-9;

}  // namespace

PlacementEval evaluate_placement(const SolveContext& ctx, const ControlPlan& plan,
                                 const EffGraph& eff,
                                 std::span<const int> host_of_slot, int reroute_k) {
  const ScenarioIndex& ix = ctx.ix();
  PlacementEval eval;
  eval.cf_links = plan.cf_links;
  eval.ctrl_latency = plan.ctrl_latency;

  if (!memory_ok(ctx, host_of_slot)) return eval;

  double exec = 0.0;
  for (int slot = 0; slot < ix.num_slots(); ++slot) {
    double c = ctx.exec(slot, host_of_slot[slot]);
    if (c == kInf) return eval;
    exec += c;
  }
  eval.exec_s = exec;

  // demanded commodities, in (workflow, hop) then response order
  for (int w = 0; w < ix.num_workflows(); ++w) {
    const int len = ix.workflow_len(w);
    int prev = ix.starter_host(w);
    for (int a = 0; a < len; ++a) {
      const int slot = ix.slot(w, a);
      const int cur = host_of_slot[slot];
      if (cur != prev) {
        RoutedCommodity c;
        c.h = prev;
        c.slot = slot;
        c.w = w;
        c.src = prev;
        c.dst = cur;
        c.demand_bytes = ctx.slot_input[slot];
        eval.commodities.push_back(std::move(c));
      }
      prev = cur;
    }
    const int starter = ix.starter_host(w);
    if (prev != starter) {
      RoutedCommodity c;
      c.is_response = true;
      c.h = prev;
      c.w = w;
      c.src = prev;
      c.dst = starter;
      c.demand_bytes = ctx.wf_output[w];
      eval.commodities.push_back(std::move(c));
    }
  }

  LoadState loads{std::vector<double>(ix.num_links(), 0.0), &ix};
  const double omega = static_cast<double>(ix.scenario().control.control_packet_bytes);
  for (const auto& links : eval.cf_links)
    for (int l : links) loads.load[l] += omega;

  for (auto& c : eval.commodities) {
    c.links = path_links(ix, eff.tree[c.src], c.src, c.dst);
    for (int l : c.links) loads.load[l] += c.demand_bytes;
  }

  eval.exact = true;
  int bad_link = -1;
  double violation = loads.worst_violation(&bad_link);
  if (violation > kCapacityTol) {
    // overloaded: move commodities (largest demand first) off the worst link
    // onto their cheapest alternative that fits
    eval.exact = false;
    const int max_rounds = static_cast<int>(eval.commodities.size() + ix.num_switches()) * 2 + 8;
    for (int round = 0; round < max_rounds && violation > kCapacityTol; ++round) {
      std::vector<int> users;
      for (size_t i = 0; i < eval.commodities.size(); ++i) {
        const auto& c = eval.commodities[i];
        if (std::find(c.links.begin(), c.links.end(), bad_link) != c.links.end())
          users.push_back(static_cast<int>(i));
      }
      std::stable_sort(users.begin(), users.end(), [&](int a, int b) {
        return eval.commodities[a].demand_bytes > eval.commodities[b].demand_bytes;
      });
      bool moved = false;
      for (int ci : users) {
        auto& c = eval.commodities[ci];
        auto alts = k_shortest_paths(ix, c.src, c.dst, reroute_k, eff.weight);
        for (const auto& alt : alts) {
          if (alt == c.links) continue;
          std::vector<double> trial = loads.load;
          for (int l : c.links) trial[l] -= c.demand_bytes;
          for (int l : alt) trial[l] += c.demand_bytes;
          double worst = 0.0;
          for (size_t l = 0; l < trial.size(); ++l)
            worst = std::max(worst, trial[l] - ix.link(static_cast<int>(l)).capacity_bps);
          if (worst < violation - kCapacityTol) {
            loads.load = std::move(trial);
            c.links = alt;
            moved = true;
            break;
          }
        }
        if (moved) break;
      }
      if (!moved) {
        // try moving control flows as a last resort
        for (size_t s = 0; s < eval.cf_links.size() && !moved; ++s) {
          auto& links = eval.cf_links[s];
          if (links.empty()) continue;
          if (std::find(links.begin(), links.end(), bad_link) == links.end()) continue;
          const int src = ix.switch_node(static_cast<int>(s));
          const int dst = ix.switch_node(plan.controller_of[s]);
          auto alts = k_shortest_paths(ix, src, dst, reroute_k, ctx.delta);
          for (const auto& alt : alts) {
            if (alt == links) continue;
            std::vector<double> trial = loads.load;
            for (int l : links) trial[l] -= omega;
            for (int l : alt) trial[l] += omega;
            double worst = 0.0;
            for (size_t l = 0; l < trial.size(); ++l)
              worst = std::max(worst, trial[l] - ix.link(static_cast<int>(l)).capacity_bps);
            if (worst < violation - kCapacityTol) {
              loads.load = std::move(trial);
              links = alt;
              eval.ctrl_latency[s] = 0.0;
              for (int l : alt) eval.ctrl_latency[s] += ctx.delta[l];
              moved = true;
              break;
            }
          }
        }
      }
      if (!moved) break;
      violation = loads.worst_violation(&bad_link);
    }
    if (violation > kCapacityTol) return eval;  // infeasible at this placement
  }

  // objective from the final paths
  const bool per_hop = ctx.model->options.control_charge == ControlChargeMode::per_hop;
  double net = 0.0, control = 0.0;
  for (const auto& c : eval.commodities) {
    for (int l : c.links) {
      net += ctx.delta[l];
      const int dst = ix.link(l).dst;
      if (per_hop && ix.node_is_switch(dst))
        control += eval.ctrl_latency[ix.node_switch(dst)];
    }
  }
  if (!per_hop) {
    const double pairs = static_cast<double>(ix.num_hosts()) *
                         static_cast<double>(ix.num_workflows());
    for (int s = 0; s < ix.num_switches(); ++s)
      control += pairs * static_cast<double>(ix.in_links(ix.switch_node(s)).size()) *
                 eval.ctrl_latency[s];
  }
  eval.net_s = net;
  eval.ctrl_s = control;
  eval.objective = exec + net + control;
  eval.feasible = true;
  return eval;
}

DeploymentSolution assemble_solution(const SolveContext& ctx, const ControlPlan& plan,
                                     const PlacementEval& eval,
                                     std::span<const int> host_of_slot,
                                     SolveStatus status, std::string solver,
                                     double wall_time_s, double best_bound) {
  const ModelIR& m = *ctx.model;
  const ScenarioIndex& ix = ctx.ix();

  DeploymentSolution sol;
  sol.status = status;
  sol.solver = std::move(solver);
  sol.wall_time_s = wall_time_s;
  sol.scenario_fingerprint = scenario_fingerprint(ix.scenario());
  sol.control_charge = m.options.control_charge;

  if (status == SolveStatus::Infeasible || status == SolveStatus::TimeLimit) {
    sol.best_bound = best_bound;
    return sol;
  }

  std::vector<uint8_t> bins(m.vars.num_binary(), 0);
  for (int slot = 0; slot < ix.num_slots(); ++slot)
    bins[m.vars.z(slot, host_of_slot[slot])] = 1;
  for (int t : plan.placed) bins[m.vars.x(t)] = 1;
  for (int s = 0; s < ix.num_switches(); ++s) {
    bins[m.vars.y(s, plan.controller_of[s])] = 1;
    for (int l : eval.cf_links[s]) bins[m.vars.cf(s, l)] = 1;
  }
  for (const auto& c : eval.commodities) {
    for (int l : c.links) {
      if (c.is_response)
        bins[m.vars.f_resp(c.h, c.w, l)] = 1;
      else
        bins[m.vars.f(c.h, c.slot, l)] = 1;
    }
  }
  m.fill_hop_products(bins);

  const auto full = m.complete_assignment(bins);
  const double model_obj = m.objective_value(full);
  if (std::fabs(model_obj - eval.objective) > 1e-9)
    throw std::logic_error("solver objective disagrees with the model objective");
  const auto residuals = check_residuals(m, full);
  if (!residuals.within(1e-6))
    throw std::logic_error("assembled solution violates model constraints");

  sol.assignment = std::move(bins);
  sol.objective_value = eval.objective;
  sol.best_bound = best_bound;
  const double denom = std::max(std::fabs(eval.objective), 1e-12);
  sol.gap = std::max(0.0, (eval.objective - best_bound) / denom);
  return sol;
}

std::vector<std::vector<int>> controller_subsets(const SolveContext& ctx, int max_size) {
  const int S = static_cast<int>(ctx.switches_by_id.size());
  std::vector<std::vector<int>> subsets;
  if (S == 0) return subsets;
  max_size = std::min(max_size, S);
  std::vector<int> pick;
  // sizes ascending, lexicographic within each size over id-sorted switches
  auto rec = [&](auto&& self, int start, int remaining) -> void {
    if (remaining == 0) {
      subsets.push_back(pick);
      return;
    }
    for (int i = start; i <= S - remaining; ++i) {
      pick.push_back(ctx.switches_by_id[i]);
      self(self, i + 1, remaining - 1);
      pick.pop_back();
    }
  };
  for (int size = 1; size <= max_size; ++size) rec(rec, 0, size);
  return subsets;
}

std::vector<int> solution_key(const SolveContext& ctx, std::span<const int> host_of_slot,
                              const ControlPlan& plan) {
  std::vector<int> key;
  key.reserve(host_of_slot.size() + plan.placed.size() + plan.controller_of.size());
  for (int h : host_of_slot) key.push_back(ctx.host_rank[h]);
  for (int t : plan.placed) key.push_back(ctx.switch_rank[t]);
  for (int t : plan.controller_of) key.push_back(t >= 0 ? ctx.switch_rank[t] : -1);
  return key;
}

}  // namespace dado::detail
