#pragma once
// Domain types for SDN-edge infrastructures and microservice workloads.
//
// A scenario is a directed graph of hosts and switches plus the workload
// running on top of it: a microservice catalog and per-host workflow
// requests. All types are plain values and immutable by convention once
// a scenario has been validated; they can be shared freely across threads.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace dado {

enum class HostKind { iot_device, edge_server, fog_node, cloud_node };

std::string to_string(HostKind kind);
HostKind host_kind_from_string(const std::string& s);

// Computing element attached to the network through a switch. cpu_hz and
// ram_bytes are the capacities left over for this application; a host with
// zero for either is a non-computing device (it can still start workflows,
// it just cannot run microservices with positive demand).
struct Host {
  std::string id;
  int64_t cpu_hz = 0;
  int64_t ram_bytes = 0;
  std::string attached_switch;
  HostKind kind = HostKind::iot_device;
};

struct SwitchNode {
  std::string id;
  bool controller_capable = true;
};

// Directed link. An undirected cable is encoded as two links with equal
// attributes, because routing distinguishes the two directions.
struct Link {
  std::string src;
  std::string dst;
  double latency_s = 0.0;
  double capacity_bps = 0.0;
};

struct Microservice {
  std::string id;
  int64_t workload_cycles = 0;  // CPU cycles per execution
  int64_t input_bytes = 0;
  int64_t output_bytes = 0;
  int64_t ram_bytes = 0;
};

// Ordered chain of microservices realizing one functionality, started by
// exactly one host.
struct Workflow {
  std::string id;
  std::string starter_host;
  std::vector<std::string> chain;
};

struct ControlPlaneConfig {
  int max_controllers = 1;
  int64_t control_packet_bytes = 0;
};

struct Scenario {
  std::vector<Host> hosts;
  std::vector<SwitchNode> switches;
  std::vector<Link> links;
  std::vector<Microservice> microservices;
  std::vector<Workflow> workflows;
  ControlPlaneConfig control;
};

struct Violation {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Side-effect free consistency check: dangling references, duplicate ids
// or links, negative attributes, disconnected host pairs. All problems are
// reported in the result; nothing throws.
ValidationReport validate(const Scenario& s);

// True iff the node id names a switch. Throws std::invalid_argument for ids
// that are neither a host nor a switch.
bool is_switch(const Scenario& s, const std::string& node_id);

// True iff the given host starts the given workflow. Exactly one host per
// workflow satisfies this. Throws std::invalid_argument on unknown ids.
bool workflow_starts(const Scenario& s, const std::string& workflow_id,
                     const std::string& host_id);

// Dense-index view over a validated scenario. Node numbering puts hosts
// first (0..H-1) and switches after (H..H+S-1). Slots flatten the (workflow,
// chain position) pairs in declaration order; pair slots do the same for
// positions >= 1 (consecutive-microservice hops).
//
// The index keeps its own copy of the scenario, so it stays valid on its
// own. Construction throws std::invalid_argument if the scenario has
// dangling references; run validate() first for a full report.
class ScenarioIndex {
 public:
  explicit ScenarioIndex(const Scenario& s);

  int num_hosts() const { return num_hosts_; }
  int num_switches() const { return num_switches_; }
  int num_nodes() const { return num_hosts_ + num_switches_; }
  int num_links() const { return static_cast<int>(links_.size()); }
  int num_workflows() const { return static_cast<int>(wf_first_slot_.size()); }
  int num_microservices() const { return num_microservices_; }
  int num_slots() const { return num_slots_; }
  int num_pair_slots() const { return num_pair_slots_; }

  bool node_is_switch(int node) const { return node >= num_hosts_; }
  int host_node(int h) const { return h; }
  int switch_node(int s) const { return num_hosts_ + s; }
  int node_switch(int node) const { return node - num_hosts_; }

  int host_index(const std::string& id) const;
  int switch_index(const std::string& id) const;
  int node_index(const std::string& id) const;  // host or switch
  int microservice_index(const std::string& id) const;
  int workflow_index(const std::string& id) const;

  int workflow_len(int w) const { return wf_len_[w]; }
  int first_slot(int w) const { return wf_first_slot_[w]; }
  int slot(int w, int a) const { return wf_first_slot_[w] + a; }
  int slot_workflow(int slot) const { return slot_wf_[slot]; }
  int slot_position(int slot) const { return slot_pos_[slot]; }
  int slot_microservice(int slot) const { return slot_ms_[slot]; }
  int starter_host(int w) const { return wf_starter_[w]; }

  // pair slot p <-> (w, a) with a in [1, len)
  int first_pair_slot(int w) const { return wf_first_pair_slot_[w]; }
  int pair_slot(int w, int a) const { return wf_first_pair_slot_[w] + a - 1; }
  int pair_slot_workflow(int p) const { return pslot_wf_[p]; }
  int pair_slot_position(int p) const { return pslot_pos_[p]; }

  struct LinkInfo {
    int src = -1;
    int dst = -1;
    double latency_s = 0.0;
    double capacity_bps = 0.0;
  };
  const LinkInfo& link(int l) const { return links_[l]; }
  const std::vector<int>& out_links(int node) const { return out_links_[node]; }
  const std::vector<int>& in_links(int node) const { return in_links_[node]; }

  int64_t host_cpu_hz(int h) const;
  int64_t host_ram_bytes(int h) const;
  int host_attached_switch(int h) const { return attached_switch_[h]; }
  const Microservice& microservice(int m) const;

  const Scenario& scenario() const { return *scenario_; }

 private:
  std::shared_ptr<const Scenario> scenario_;
  int num_hosts_ = 0;
  int num_switches_ = 0;
  int num_microservices_ = 0;
  int num_slots_ = 0;
  int num_pair_slots_ = 0;
  std::unordered_map<std::string, int> host_by_id_;
  std::unordered_map<std::string, int> switch_by_id_;
  std::unordered_map<std::string, int> ms_by_id_;
  std::unordered_map<std::string, int> wf_by_id_;
  std::vector<LinkInfo> links_;
  std::vector<std::vector<int>> out_links_;
  std::vector<std::vector<int>> in_links_;
  std::vector<int> attached_switch_;
  std::vector<int> wf_first_slot_;
  std::vector<int> wf_first_pair_slot_;
  std::vector<int> wf_len_;
  std::vector<int> wf_starter_;
  std::vector<int> slot_wf_;
  std::vector<int> slot_pos_;
  std::vector<int> slot_ms_;
  std::vector<int> pslot_wf_;
  std::vector<int> pslot_pos_;
};

}  // namespace dado
