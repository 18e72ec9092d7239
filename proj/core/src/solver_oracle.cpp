#include <algorithm>
#include <chrono>
#include <cmath>

#include "dado/solver.hpp"
#include "routing.hpp"

// Exhaustive reference backend. Placements, controller subsets and
// switch-to-controller mappings are enumerated outright; for each complete
// combination the flow support of every demanded commodity is enumerated
// over all simple paths under the link capacities. Exact by construction,
// and deliberately restricted to tiny models through oracle_var_limit.

namespace dado {

using detail::ControlPlan;
using detail::kInf;
using detail::PlacementEval;
using detail::SolveContext;

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kTieEps = 1e-12;
constexpr size_t kPathLimit = 20000;

struct Commodity {
  bool is_control = false;
  bool is_response = false;
  int h = -1, slot = -1, w = -1;  // app subscripts
  int sw = -1;                    // control subscripts: switch being mapped
  int src = -1, dst = -1;
  double demand = 0.0;
  double min_cost = 0.0;  // latency of the cheapest path, control charges aside
  std::vector<std::vector<int>> paths;  // candidates, cheapest-latency first
};

struct Candidate {
  double objective = kInf;
  std::vector<int> key;
  std::vector<int> hosts;
  ControlPlan plan;
  PlacementEval eval;
};

class OracleSearch {
 public:
  OracleSearch(const ModelIR& m, const SolverConfig& cfg)
      : m_(m), cfg_(cfg), ctx_(detail::make_context(m)), ix_(m.index) {
    deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                   std::chrono::duration<double>(cfg.time_limit_s));
    per_hop_ = m.options.control_charge == ControlChargeMode::per_hop;
    pairs_ = static_cast<double>(ix_.num_hosts()) *
             static_cast<double>(ix_.num_workflows());
  }

  DeploymentSolution run() {
    check_var_limit();

    const int nslots = ix_.num_slots();
    allowed_.resize(nslots);
    for (int slot = 0; slot < nslots; ++slot) {
      for (int r = 0; r < ix_.num_hosts(); ++r) {
        int h = ctx_.hosts_by_id[r];
        if (ctx_.exec(slot, h) < kInf) allowed_[slot].push_back(h);
      }
      if (allowed_[slot].empty()) return infeasible();  // nobody can run it
    }
    min_exec_suffix_.assign(nslots + 1, 0.0);
    for (int slot = nslots - 1; slot >= 0; --slot) {
      double best = kInf;
      for (int h : allowed_[slot]) best = std::min(best, ctx_.exec(slot, h));
      min_exec_suffix_[slot] = min_exec_suffix_[slot + 1] + best;
    }

    subsets_ = detail::controller_subsets(
        ctx_, std::min(ix_.scenario().control.max_controllers, ix_.num_switches()));

    hosts_.assign(nslots, -1);
    rem_ram_.resize(ix_.num_hosts());
    for (int h = 0; h < ix_.num_hosts(); ++h) rem_ram_[h] = ix_.host_ram_bytes(h);
    place_slot(0, 0.0);

    if (!best_.hosts.empty()) {
      return detail::assemble_solution(ctx_, best_.plan, best_.eval, best_.hosts,
                                       SolveStatus::Optimal, "oracle", 0.0,
                                       best_.objective);
    }
    return infeasible();
  }

 private:
  DeploymentSolution infeasible() {
    DeploymentSolution sol;
    sol.status = SolveStatus::Infeasible;
    sol.solver = "oracle";
    sol.scenario_fingerprint = scenario_fingerprint(ix_.scenario());
    sol.control_charge = m_.options.control_charge;
    return sol;
  }

  void check_var_limit() const {
    int64_t enumerated = 0;
    for (int v = 0; v < ix_.num_slots() * ix_.num_hosts(); ++v)
      if (!m_.fixed_zero[v]) ++enumerated;
    enumerated += ix_.num_switches();
    enumerated += static_cast<int64_t>(ix_.num_switches()) * ix_.num_switches();
    if (enumerated > cfg_.oracle_var_limit)
      throw var_limit_error(
          "oracle: " + std::to_string(enumerated) +
          " free placement/controller variables exceed the configured limit of " +
          std::to_string(cfg_.oracle_var_limit));
  }

  void check_time() const {
    if (Clock::now() > deadline_)
      throw std::runtime_error("oracle: time limit exceeded before the search finished");
  }

  void place_slot(int slot, double exec_so_far) {
    if (exec_so_far + min_exec_suffix_[slot] > best_.objective + kTieEps) return;
    if (slot == ix_.num_slots()) {
      check_time();
      explore_control(exec_so_far);
      return;
    }
    for (int h : allowed_[slot]) {
      if (rem_ram_[h] < ctx_.slot_ram[slot]) continue;
      rem_ram_[h] -= ctx_.slot_ram[slot];
      hosts_[slot] = h;
      place_slot(slot + 1, exec_so_far + ctx_.exec(slot, h));
      hosts_[slot] = -1;
      rem_ram_[h] += ctx_.slot_ram[slot];
    }
  }

  std::vector<Commodity> app_commodities() const {
    std::vector<Commodity> out;
    for (int w = 0; w < ix_.num_workflows(); ++w) {
      const int len = ix_.workflow_len(w);
      int prev = ix_.starter_host(w);
      for (int a = 0; a < len; ++a) {
        const int slot = ix_.slot(w, a);
        const int cur = hosts_[slot];
        if (cur != prev) {
          Commodity c;
          c.h = prev;
          c.slot = slot;
          c.w = w;
          c.src = prev;
          c.dst = cur;
          c.demand = ctx_.slot_input[slot];
          out.push_back(std::move(c));
        }
        prev = cur;
      }
      if (prev != ix_.starter_host(w)) {
        Commodity c;
        c.is_response = true;
        c.h = prev;
        c.w = w;
        c.src = prev;
        c.dst = ix_.starter_host(w);
        c.demand = ctx_.wf_output[w];
        out.push_back(std::move(c));
      }
    }
    return out;
  }

  void enumerate_paths(Commodity& c) const {
    c.paths = all_simple_paths(ix_, c.src, c.dst, kPathLimit);
    if (c.paths.size() >= kPathLimit)
      throw var_limit_error("oracle: path enumeration limit hit; model too large");
    std::stable_sort(c.paths.begin(), c.paths.end(),
                     [&](const std::vector<int>& a, const std::vector<int>& b) {
                       double ca = path_cost(ix_, a, ctx_.delta);
                       double cb = path_cost(ix_, b, ctx_.delta);
                       if (ca != cb) return ca < cb;
                       return a < b;
                     });
    c.min_cost = c.paths.empty() ? kInf : path_cost(ix_, c.paths.front(), ctx_.delta);
  }

  void explore_control(double exec) {
    auto app = app_commodities();
    for (auto& c : app) enumerate_paths(c);
    double app_min = 0.0;
    for (const auto& c : app) app_min += c.min_cost;
    if (app_min == kInf) return;  // some hop cannot be routed at all
    if (exec + app_min > best_.objective + kTieEps) return;

    if (ix_.num_switches() == 0) {
      ControlPlan plan;  // no control plane
      route_commodities(exec, {}, app, plan);
      return;
    }

    for (const auto& subset : subsets_) {
      std::vector<int> mapping(ix_.num_switches(), -1);
      enumerate_mapping(0, subset, mapping, exec, app);
    }
  }

  void enumerate_mapping(int s, const std::vector<int>& subset,
                         std::vector<int>& mapping, double exec,
                         const std::vector<Commodity>& app) {
    if (s == ix_.num_switches()) {
      check_time();
      std::vector<Commodity> control;
      for (int sw = 0; sw < ix_.num_switches(); ++sw) {
        if (mapping[sw] == sw) continue;
        Commodity c;
        c.is_control = true;
        c.sw = sw;
        c.src = ix_.switch_node(sw);
        c.dst = ix_.switch_node(mapping[sw]);
        c.demand = static_cast<double>(ix_.scenario().control.control_packet_bytes);
        enumerate_paths(c);
        if (c.paths.empty()) return;  // controller unreachable, mapping dead
        control.push_back(std::move(c));
      }
      ControlPlan plan;
      plan.placed = subset;
      plan.controller_of = mapping;
      plan.cf_links.assign(ix_.num_switches(), {});
      plan.ctrl_latency.assign(ix_.num_switches(), 0.0);
      route_commodities(exec, control, app, plan);
      return;
    }
    for (int t : subset) {
      mapping[s] = t;
      enumerate_mapping(s + 1, subset, mapping, exec, app);
    }
    mapping[s] = -1;
  }

  // joint path choice over control commodities (which set the per-switch
  // control latencies) followed by app commodities (which pay them)
  void route_commodities(double exec, std::vector<Commodity> control,
                         const std::vector<Commodity>& app, ControlPlan plan) {
    commodities_.clear();
    for (auto& c : control) commodities_.push_back(std::move(c));
    for (const auto& c : app) commodities_.push_back(c);

    min_rest_.assign(commodities_.size() + 1, 0.0);
    for (int i = static_cast<int>(commodities_.size()) - 1; i >= 0; --i) {
      const Commodity& c = commodities_[i];
      double self_min = 0.0;
      if (c.is_control) {
        if (!per_hop_)
          self_min = pairs_ * static_cast<double>(ix_.in_links(c.src).size()) * c.min_cost;
      } else {
        self_min = c.min_cost;
      }
      min_rest_[i] = min_rest_[i + 1] + self_min;
    }

    loads_.assign(ix_.num_links(), 0.0);
    choice_.assign(commodities_.size(), -1);
    plan_ = &plan;
    exec_ = exec;
    pick_path(0, 0.0);
    plan_ = nullptr;
  }

  void pick_path(size_t k, double acc) {
    if (exec_ + acc + min_rest_[k] > best_.objective + kTieEps) return;
    if (k == commodities_.size()) {
      finish_leaf(acc);
      return;
    }
    Commodity& c = commodities_[k];
    for (size_t p = 0; p < c.paths.size(); ++p) {
      const auto& links = c.paths[p];
      bool fits = true;
      for (int l : links) {
        if (loads_[l] + c.demand > ix_.link(l).capacity_bps + 1e-9) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;

      double cost = 0.0;
      if (c.is_control) {
        double cl = path_cost(ix_, links, ctx_.delta);
        plan_->ctrl_latency[c.sw] = cl;
        plan_->cf_links[c.sw] = links;
        if (!per_hop_)
          cost = pairs_ * static_cast<double>(ix_.in_links(c.src).size()) * cl;
      } else {
        for (int l : links) {
          cost += ctx_.delta[l];
          const int dst = ix_.link(l).dst;
          if (per_hop_ && ix_.node_is_switch(dst))
            cost += plan_->ctrl_latency[ix_.node_switch(dst)];
        }
      }
      for (int l : links) loads_[l] += c.demand;
      choice_[k] = static_cast<int>(p);
      pick_path(k + 1, acc + cost);
      choice_[k] = -1;
      for (int l : links) loads_[l] -= c.demand;
      if (c.is_control) {
        plan_->ctrl_latency[c.sw] = 0.0;
        plan_->cf_links[c.sw].clear();
      }
    }
  }

  void finish_leaf(double acc) {
    const double total = exec_ + acc;
    if (total > best_.objective + kTieEps) return;
    ControlPlan plan = *plan_;
    auto key = detail::solution_key(ctx_, hosts_, plan);
    // within the tie window only a lexicographically smaller key replaces
    // the incumbent
    if (!best_.hosts.empty() && total >= best_.objective - kTieEps && !(key < best_.key))
      return;

    PlacementEval eval;
    eval.feasible = true;
    eval.exact = true;
    eval.exec_s = exec_;
    eval.cf_links = plan.cf_links;
    eval.ctrl_latency = plan.ctrl_latency;
    double net = 0.0, control = 0.0;
    for (size_t k = 0; k < commodities_.size(); ++k) {
      const Commodity& c = commodities_[k];
      if (c.is_control) continue;
      detail::RoutedCommodity rc;
      rc.is_response = c.is_response;
      rc.h = c.h;
      rc.slot = c.slot;
      rc.w = c.w;
      rc.src = c.src;
      rc.dst = c.dst;
      rc.demand_bytes = c.demand;
      rc.links = c.paths[choice_[k]];
      for (int l : rc.links) {
        net += ctx_.delta[l];
        const int dst = ix_.link(l).dst;
        if (per_hop_ && ix_.node_is_switch(dst))
          control += eval.ctrl_latency[ix_.node_switch(dst)];
      }
      eval.commodities.push_back(std::move(rc));
    }
    if (!per_hop_) {
      for (int s = 0; s < ix_.num_switches(); ++s)
        control += pairs_ * static_cast<double>(ix_.in_links(ix_.switch_node(s)).size()) *
                   eval.ctrl_latency[s];
    }
    eval.net_s = net;
    eval.ctrl_s = control;
    eval.objective = exec_ + net + control;

    best_.objective = eval.objective;
    best_.key = std::move(key);
    best_.hosts = hosts_;
    best_.plan = std::move(plan);
    best_.eval = std::move(eval);
  }

  const ModelIR& m_;
  const SolverConfig& cfg_;
  SolveContext ctx_;
  const ScenarioIndex& ix_;
  Clock::time_point deadline_;
  bool per_hop_ = true;
  double pairs_ = 0.0;

  std::vector<std::vector<int>> allowed_;
  std::vector<double> min_exec_suffix_;
  std::vector<std::vector<int>> subsets_;
  std::vector<int> hosts_;
  std::vector<int64_t> rem_ram_;

  std::vector<Commodity> commodities_;
  std::vector<double> min_rest_;
  std::vector<double> loads_;
  std::vector<int> choice_;
  ControlPlan* plan_ = nullptr;
  double exec_ = 0.0;

  Candidate best_;
};

}  // namespace

void SolverConfig::check() const {
  if (!(time_limit_s > 0)) throw std::invalid_argument("time_limit_s must be > 0");
  if (optimality_gap < 0 || optimality_gap >= 1)
    throw std::invalid_argument("optimality_gap must be in [0, 1)");
  if (oracle_var_limit < 1) throw std::invalid_argument("oracle_var_limit must be >= 1");
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::TimeLimit: return "time_limit";
  }
  return "?";
}

SolveStatus solve_status_from_string(const std::string& s) {
  if (s == "optimal") return SolveStatus::Optimal;
  if (s == "feasible") return SolveStatus::Feasible;
  if (s == "infeasible") return SolveStatus::Infeasible;
  if (s == "time_limit") return SolveStatus::TimeLimit;
  throw std::invalid_argument("unknown solve status: " + s);
}

double DeploymentSolution::value(const ModelIR& m, VarKind kind, int a, int b,
                                 int c) const {
  int idx = -1;
  switch (kind) {
    case VarKind::Z: idx = m.vars.z(a, b); break;
    case VarKind::F: idx = m.vars.f(a, b, c); break;
    case VarKind::FResp: idx = m.vars.f_resp(a, b, c); break;
    case VarKind::X: idx = m.vars.x(a); break;
    case VarKind::Y: idx = m.vars.y(a, b); break;
    case VarKind::CF: idx = m.vars.cf(a, b); break;
    case VarKind::HopSrc: idx = m.vars.hop_src(a, b, c); break;
    case VarKind::HopSink: idx = m.vars.hop_sink(a, b, c); break;
    default: throw std::invalid_argument("value(): auxiliary kinds are not stored");
  }
  return idx < static_cast<int>(assignment.size()) ? assignment[idx] : 0.0;
}

DeploymentSolution solve_oracle(const ModelIR& m, const SolverConfig& cfg) {
  cfg.check();
  const auto start = Clock::now();
  OracleSearch search(m, cfg);
  DeploymentSolution sol = search.run();
  sol.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
  return sol;
}

}  // namespace dado
