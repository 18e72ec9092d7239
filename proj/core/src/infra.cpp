#include "dado/infra.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace dado {

std::string to_string(HostKind kind) {
  switch (kind) {
    case HostKind::iot_device: return "iot_device";
    case HostKind::edge_server: return "edge_server";
    case HostKind::fog_node: return "fog_node";
    case HostKind::cloud_node: return "cloud_node";
  }
  throw std::invalid_argument("unknown host kind");
}

HostKind host_kind_from_string(const std::string& s) {
  if (s == "iot_device") return HostKind::iot_device;
  if (s == "edge_server") return HostKind::edge_server;
  if (s == "fog_node") return HostKind::fog_node;
  if (s == "cloud_node") return HostKind::cloud_node;
  throw std::invalid_argument("unknown host kind: " + s);
}

namespace {

void add(ValidationReport& r, const std::string& code, std::string message) {
  r.violations.push_back({code, std::move(message)});
}

}  // namespace

ValidationReport validate(const Scenario& s) {
  ValidationReport report;

  std::set<std::string> host_ids, switch_ids, ms_ids, wf_ids;
  for (const auto& h : s.hosts) {
    if (!host_ids.insert(h.id).second)
      add(report, "duplicate-host", "duplicate host id '" + h.id + "'");
    if (h.cpu_hz < 0)
      add(report, "negative-attribute", "host '" + h.id + "' has negative cpu_hz");
    if (h.ram_bytes < 0)
      add(report, "negative-attribute", "host '" + h.id + "' has negative ram_bytes");
  }
  for (const auto& sw : s.switches) {
    if (!switch_ids.insert(sw.id).second)
      add(report, "duplicate-switch", "duplicate switch id '" + sw.id + "'");
    if (host_ids.count(sw.id))
      add(report, "id-overlap", "id '" + sw.id + "' is used by both a host and a switch");
  }
  for (const auto& h : s.hosts) {
    if (!switch_ids.count(h.attached_switch))
      add(report, "dangling-reference",
          "host '" + h.id + "' is attached to unknown switch '" + h.attached_switch + "'");
  }

  auto known_node = [&](const std::string& id) {
    return host_ids.count(id) > 0 || switch_ids.count(id) > 0;
  };

  std::set<std::pair<std::string, std::string>> link_pairs;
  for (const auto& l : s.links) {
    if (!known_node(l.src))
      add(report, "dangling-reference", "link references unknown node '" + l.src + "'");
    if (!known_node(l.dst))
      add(report, "dangling-reference", "link references unknown node '" + l.dst + "'");
    if (l.src == l.dst)
      add(report, "self-link", "link from '" + l.src + "' to itself");
    if (!link_pairs.insert({l.src, l.dst}).second)
      add(report, "duplicate-link", "duplicate link " + l.src + " -> " + l.dst);
    if (l.latency_s < 0)
      add(report, "negative-attribute", "link " + l.src + " -> " + l.dst + " has negative latency");
    if (l.capacity_bps <= 0)
      add(report, "nonpositive-capacity",
          "link " + l.src + " -> " + l.dst + " has capacity <= 0");
  }

  for (const auto& m : s.microservices) {
    if (!ms_ids.insert(m.id).second)
      add(report, "duplicate-microservice", "duplicate microservice id '" + m.id + "'");
    if (m.workload_cycles < 0 || m.input_bytes < 0 || m.output_bytes < 0 || m.ram_bytes < 0)
      add(report, "negative-attribute", "microservice '" + m.id + "' has a negative attribute");
  }

  for (const auto& w : s.workflows) {
    if (!wf_ids.insert(w.id).second)
      add(report, "duplicate-workflow", "duplicate workflow id '" + w.id + "'");
    if (w.chain.empty())
      add(report, "empty-chain", "workflow '" + w.id + "' has an empty chain");
    if (!host_ids.count(w.starter_host))
      add(report, "dangling-reference",
          "workflow '" + w.id + "' starts at unknown host '" + w.starter_host + "'");
    for (const auto& m : w.chain) {
      if (!ms_ids.count(m))
        add(report, "dangling-reference",
            "workflow '" + w.id + "' references unknown microservice '" + m + "'");
    }
  }

  if (s.control.max_controllers < 1)
    add(report, "invalid-control", "max_controllers must be >= 1");
  if (s.control.control_packet_bytes < 0)
    add(report, "negative-attribute", "control_packet_bytes is negative");

  // Host-to-host reachability over the directed link graph. Only meaningful
  // when the id references above are intact.
  bool ids_ok = std::none_of(report.violations.begin(), report.violations.end(),
                             [](const Violation& v) {
                               return v.code == "dangling-reference" ||
                                      v.code == "id-overlap" || v.code == "duplicate-host" ||
                                      v.code == "duplicate-switch";
                             });
  if (ids_ok && s.hosts.size() > 1) {
    std::unordered_map<std::string, int> node_idx;
    int n = 0;
    for (const auto& h : s.hosts) node_idx[h.id] = n++;
    for (const auto& sw : s.switches) node_idx[sw.id] = n++;
    std::vector<std::vector<int>> out(n);
    for (const auto& l : s.links) out[node_idx[l.src]].push_back(node_idx[l.dst]);

    std::vector<char> seen(n, 0);
    std::deque<int> queue{node_idx[s.hosts.front().id]};
    seen[queue.front()] = 1;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : out[u])
        if (!seen[v]) {
          seen[v] = 1;
          queue.push_back(v);
        }
    }
    for (const auto& h : s.hosts) {
      if (!seen[node_idx[h.id]]) {
        add(report, "disconnected",
            "host '" + h.id + "' is not reachable from host '" + s.hosts.front().id + "'");
      }
    }
  }

  return report;
}

bool is_switch(const Scenario& s, const std::string& node_id) {
  for (const auto& sw : s.switches)
    if (sw.id == node_id) return true;
  for (const auto& h : s.hosts)
    if (h.id == node_id) return false;
  throw std::invalid_argument("unknown node id: " + node_id);
}

bool workflow_starts(const Scenario& s, const std::string& workflow_id,
                     const std::string& host_id) {
  const Workflow* wf = nullptr;
  for (const auto& w : s.workflows)
    if (w.id == workflow_id) {
      wf = &w;
      break;
    }
  if (!wf) throw std::invalid_argument("unknown workflow id: " + workflow_id);
  bool host_known = false;
  for (const auto& h : s.hosts)
    if (h.id == host_id) {
      host_known = true;
      break;
    }
  if (!host_known) throw std::invalid_argument("unknown host id: " + host_id);
  return wf->starter_host == host_id;
}

ScenarioIndex::ScenarioIndex(const Scenario& s)
    : scenario_(std::make_shared<const Scenario>(s)) {
  const Scenario& sc = *scenario_;
  num_hosts_ = static_cast<int>(sc.hosts.size());
  num_switches_ = static_cast<int>(sc.switches.size());
  num_microservices_ = static_cast<int>(sc.microservices.size());

  for (int h = 0; h < num_hosts_; ++h) host_by_id_[sc.hosts[h].id] = h;
  for (int w = 0; w < num_switches_; ++w) switch_by_id_[sc.switches[w].id] = w;
  for (int m = 0; m < num_microservices_; ++m) ms_by_id_[sc.microservices[m].id] = m;

  auto node_of = [&](const std::string& id) {
    if (auto it = host_by_id_.find(id); it != host_by_id_.end()) return it->second;
    if (auto it = switch_by_id_.find(id); it != switch_by_id_.end())
      return num_hosts_ + it->second;
    throw std::invalid_argument("unknown node id: " + id);
  };

  attached_switch_.resize(num_hosts_);
  for (int h = 0; h < num_hosts_; ++h) {
    auto it = switch_by_id_.find(sc.hosts[h].attached_switch);
    if (it == switch_by_id_.end())
      throw std::invalid_argument("host '" + sc.hosts[h].id +
                                  "' is attached to unknown switch");
    attached_switch_[h] = it->second;
  }

  out_links_.resize(num_nodes());
  in_links_.resize(num_nodes());
  links_.reserve(sc.links.size());
  for (const auto& l : sc.links) {
    LinkInfo info;
    info.src = node_of(l.src);
    info.dst = node_of(l.dst);
    info.latency_s = l.latency_s;
    info.capacity_bps = l.capacity_bps;
    int idx = static_cast<int>(links_.size());
    links_.push_back(info);
    out_links_[info.src].push_back(idx);
    in_links_[info.dst].push_back(idx);
  }

  int slot = 0, pslot = 0;
  for (int w = 0; w < static_cast<int>(sc.workflows.size()); ++w) {
    const Workflow& wf = sc.workflows[w];
    if (wf.chain.empty())
      throw std::invalid_argument("workflow '" + wf.id + "' has an empty chain");
    wf_by_id_[wf.id] = w;
    wf_first_slot_.push_back(slot);
    wf_first_pair_slot_.push_back(pslot);
    wf_len_.push_back(static_cast<int>(wf.chain.size()));
    auto starter = host_by_id_.find(wf.starter_host);
    if (starter == host_by_id_.end())
      throw std::invalid_argument("workflow '" + wf.id + "' starts at unknown host");
    wf_starter_.push_back(starter->second);
    for (int a = 0; a < static_cast<int>(wf.chain.size()); ++a) {
      auto ms = ms_by_id_.find(wf.chain[a]);
      if (ms == ms_by_id_.end())
        throw std::invalid_argument("workflow '" + wf.id + "' references unknown microservice");
      slot_wf_.push_back(w);
      slot_pos_.push_back(a);
      slot_ms_.push_back(ms->second);
      ++slot;
      if (a >= 1) {
        pslot_wf_.push_back(w);
        pslot_pos_.push_back(a);
        ++pslot;
      }
    }
  }
  num_slots_ = slot;
  num_pair_slots_ = pslot;
}

int ScenarioIndex::host_index(const std::string& id) const {
  auto it = host_by_id_.find(id);
  if (it == host_by_id_.end()) throw std::invalid_argument("unknown host id: " + id);
  return it->second;
}

int ScenarioIndex::switch_index(const std::string& id) const {
  auto it = switch_by_id_.find(id);
  if (it == switch_by_id_.end()) throw std::invalid_argument("unknown switch id: " + id);
  return it->second;
}

int ScenarioIndex::node_index(const std::string& id) const {
  if (auto it = host_by_id_.find(id); it != host_by_id_.end()) return it->second;
  if (auto it = switch_by_id_.find(id); it != switch_by_id_.end())
    return num_hosts_ + it->second;
  throw std::invalid_argument("unknown node id: " + id);
}

int ScenarioIndex::microservice_index(const std::string& id) const {
  auto it = ms_by_id_.find(id);
  if (it == ms_by_id_.end()) throw std::invalid_argument("unknown microservice id: " + id);
  return it->second;
}

int ScenarioIndex::workflow_index(const std::string& id) const {
  auto it = wf_by_id_.find(id);
  if (it == wf_by_id_.end()) throw std::invalid_argument("unknown workflow id: " + id);
  return it->second;
}

int64_t ScenarioIndex::host_cpu_hz(int h) const { return scenario_->hosts[h].cpu_hz; }
int64_t ScenarioIndex::host_ram_bytes(int h) const { return scenario_->hosts[h].ram_bytes; }

const Microservice& ScenarioIndex::microservice(int m) const {
  return scenario_->microservices[m];
}

}  // namespace dado
