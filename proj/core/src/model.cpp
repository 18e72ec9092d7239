#include "dado/model.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dado {

VarTable::VarTable(const ScenarioIndex& ix, bool control_aux) {
  H_ = ix.num_hosts();
  S_ = ix.num_switches();
  L_ = ix.num_links();
  W_ = ix.num_workflows();
  nslots_ = ix.num_slots();
  npslots_ = ix.num_pair_slots();

  int off = nslots_ * H_;  // Z block
  off_f_ = off;
  off += L_ * H_ * nslots_;
  off_fr_ = off;
  off += L_ * H_ * W_;
  off_x_ = off;
  off += S_;
  off_y_ = off;
  off += S_ * S_;
  off_cf_ = off;
  off += L_ * S_;
  off_hsrc_ = off;
  off += H_ * H_ * npslots_;
  off_hsink_ = off;
  off += H_ * H_ * npslots_;
  num_binary_ = off;

  if (control_aux) {
    off_hops_ = off;
    off_charge_ = off + S_;
    num_aux_ = S_ + L_ * S_;
  } else {
    off_hops_ = off_charge_ = -1;
    num_aux_ = 0;
  }
}

int64_t VarTable::count(VarKind kind) const {
  switch (kind) {
    case VarKind::Z: return static_cast<int64_t>(nslots_) * H_;
    case VarKind::F: return static_cast<int64_t>(L_) * H_ * nslots_;
    case VarKind::FResp: return static_cast<int64_t>(L_) * H_ * W_;
    case VarKind::X: return S_;
    case VarKind::Y: return static_cast<int64_t>(S_) * S_;
    case VarKind::CF: return static_cast<int64_t>(L_) * S_;
    case VarKind::HopSrc:
    case VarKind::HopSink: return static_cast<int64_t>(H_) * H_ * npslots_;
    case VarKind::SwitchHops: return num_aux_ > 0 ? S_ : 0;
    case VarKind::CtrlCharge: return num_aux_ > 0 ? static_cast<int64_t>(L_) * S_ : 0;
  }
  return 0;
}

VarRef VarTable::ref(int index) const {
  VarRef r{};
  if (index < off_f_) {
    r.kind = VarKind::Z;
    r.a = index / H_;  // slot
    r.b = index % H_;  // host
    return r;
  }
  if (index < off_fr_) {
    // layout f(h, slot, l): a = h, b = slot, c = l
    int rel = index - off_f_;
    r.kind = VarKind::F;
    r.c = rel % L_;
    rel /= L_;
    r.b = rel % nslots_;
    r.a = rel / nslots_;
    return r;
  }
  if (index < off_x_) {
    int rel = index - off_fr_;
    r.kind = VarKind::FResp;
    r.c = rel % L_;
    rel /= L_;
    r.b = rel % W_;
    r.a = rel / W_;
    return r;
  }
  if (index < off_y_) {
    r.kind = VarKind::X;
    r.a = index - off_x_;
    return r;
  }
  if (index < off_cf_) {
    int rel = index - off_y_;
    r.kind = VarKind::Y;
    r.a = rel / S_;
    r.b = rel % S_;
    return r;
  }
  if (index < off_hsrc_) {
    int rel = index - off_cf_;
    r.kind = VarKind::CF;
    r.a = rel / L_;
    r.b = rel % L_;
    return r;
  }
  if (index < off_hsink_) {
    int rel = index - off_hsrc_;
    r.kind = VarKind::HopSrc;
    r.c = rel % H_;
    rel /= H_;
    r.b = rel % H_;
    r.a = rel / H_;  // pslot
    return r;
  }
  if (index < num_binary_) {
    int rel = index - off_hsink_;
    r.kind = VarKind::HopSink;
    r.c = rel % H_;
    rel /= H_;
    r.b = rel % H_;
    r.a = rel / H_;
    return r;
  }
  if (num_aux_ > 0 && index < off_charge_) {
    r.kind = VarKind::SwitchHops;
    r.a = index - off_hops_;
    return r;
  }
  if (num_aux_ > 0 && index < size()) {
    int rel = index - off_charge_;
    r.kind = VarKind::CtrlCharge;
    r.a = rel / L_;
    r.b = rel % L_;
    return r;
  }
  throw std::out_of_range("variable index out of range");
}

std::string_view row_family_name(RowFamily f) {
  switch (f) {
    case RowFamily::eq1: return "EQ1";
    case RowFamily::eq2: return "EQ2";
    case RowFamily::eq4: return "EQ4";
    case RowFamily::eq5: return "EQ5";
    case RowFamily::eq6: return "EQ6";
    case RowFamily::eq7: return "EQ7";
    case RowFamily::eq8: return "EQ8";
    case RowFamily::eq9: return "EQ9";
    case RowFamily::eq10: return "EQ10";
    case RowFamily::eq11: return "EQ11";
    case RowFamily::eq12: return "EQ12";
    case RowFamily::eq13: return "EQ13";
    case RowFamily::eq14: return "EQ14";
    case RowFamily::eq15: return "EQ15";
    case RowFamily::eq16: return "EQ16";
    case RowFamily::eq17: return "EQ17";
    case RowFamily::ctrl_hops: return "CTRLH";
    case RowFamily::ctrl_charge: return "CTRLC";
  }
  return "?";
}

std::string_view to_string(ControlChargeMode m) {
  return m == ControlChargeMode::per_hop ? "per_hop" : "per_link_constant";
}

ControlChargeMode control_charge_from_string(const std::string& s) {
  if (s == "per_hop") return ControlChargeMode::per_hop;
  if (s == "per_link_constant") return ControlChargeMode::per_link_constant;
  throw std::invalid_argument("unknown control charge mode: " + s);
}

int64_t ModelIR::rows_in_family(RowFamily f) const {
  int64_t n = 0;
  for (const Row& r : rows)
    if (r.family == f) ++n;
  return n;
}

namespace {

class RowBuilder {
 public:
  RowBuilder(ModelIR& m, RowFamily f, RowSense sense, std::array<int32_t, 4> sub,
             double rhs)
      : m_(m) {
    row_.family = f;
    row_.sense = sense;
    row_.sub = sub;
    row_.rhs = rhs;
    row_.begin = static_cast<uint32_t>(m.pool.size());
  }
  void term(int var, double coeff) {
    if (coeff != 0.0) m_.pool.push_back({var, coeff});
  }
  void done() {
    row_.end = static_cast<uint32_t>(m_.pool.size());
    m_.rows.push_back(row_);
  }

 private:
  ModelIR& m_;
  Row row_;
};

void require_variables(const ModelIR& m) {
  if (!m.variables_built)
    throw std::logic_error("model variables have not been built yet");
}

}  // namespace

ModelIR begin_model(const Scenario& s, ModelOptions options) {
  auto report = validate(s);
  if (!report.ok()) {
    std::string msg = "invalid scenario: " + report.violations.front().message;
    if (report.violations.size() > 1)
      msg += " (and " + std::to_string(report.violations.size() - 1) + " more)";
    throw std::invalid_argument(msg);
  }
  ModelIR m{ScenarioIndex(s), options, {}, {}, {}, {}, {}, {}, false, false};
  return m;
}

void build_variables(ModelIR& m) {
  const ScenarioIndex& ix = m.index;
  if (ix.num_workflows() == 0)
    throw std::invalid_argument("scenario has no workflows; the model would be degenerate");
  m.vars = VarTable(ix, m.options.control_charge == ControlChargeMode::per_hop);
  m.fixed_zero.assign(m.vars.num_binary(), 0);
  // Hosts without compute power can never run a microservice; pin their
  // placement variables instead of producing an unbounded execution cost.
  for (int h = 0; h < ix.num_hosts(); ++h) {
    if (ix.host_cpu_hz(h) > 0) continue;
    for (int slot = 0; slot < ix.num_slots(); ++slot)
      m.fixed_zero[m.vars.z(slot, h)] = 1;
  }
  m.variables_built = true;
}

void add_placement_constraints(ModelIR& m) {
  require_variables(m);
  const ScenarioIndex& ix = m.index;
  for (int slot = 0; slot < ix.num_slots(); ++slot) {
    RowBuilder row(m, RowFamily::eq1, RowSense::eq,
                   {ix.slot_workflow(slot), ix.slot_position(slot), -1, -1}, 1.0);
    for (int h = 0; h < ix.num_hosts(); ++h) row.term(m.vars.z(slot, h), 1.0);
    row.done();
  }
  for (int h = 0; h < ix.num_hosts(); ++h) {
    RowBuilder row(m, RowFamily::eq2, RowSense::le, {h, -1, -1, -1},
                   static_cast<double>(ix.host_ram_bytes(h)));
    for (int slot = 0; slot < ix.num_slots(); ++slot) {
      double ram = static_cast<double>(ix.microservice(ix.slot_microservice(slot)).ram_bytes);
      row.term(m.vars.z(slot, h), ram);
    }
    row.done();
  }
}

void add_controller_constraints(ModelIR& m) {
  require_variables(m);
  const ScenarioIndex& ix = m.index;
  const int S = ix.num_switches();
  if (S == 0) return;
  {
    RowBuilder row(m, RowFamily::eq4, RowSense::le, {-1, -1, -1, -1},
                   static_cast<double>(ix.scenario().control.max_controllers));
    for (int s = 0; s < S; ++s) row.term(m.vars.x(s), 1.0);
    row.done();
  }
  for (int s = 0; s < S; ++s) {
    RowBuilder row(m, RowFamily::eq5, RowSense::eq, {s, -1, -1, -1}, 1.0);
    for (int t = 0; t < S; ++t) row.term(m.vars.y(s, t), 1.0);
    row.done();
  }
  for (int s = 0; s < S; ++s) {
    for (int t = 0; t < S; ++t) {
      RowBuilder row(m, RowFamily::eq6, RowSense::le, {s, t, -1, -1}, 0.0);
      row.term(m.vars.y(s, t), 1.0);
      row.term(m.vars.x(t), -1.0);
      row.done();
    }
  }
}

namespace {

// Net-outflow terms for one commodity at one node.
template <typename VarAt>
void flow_balance_terms(const ScenarioIndex& ix, RowBuilder& row, int node,
                        VarAt var_at) {
  for (int l : ix.out_links(node)) row.term(var_at(l), 1.0);
  for (int l : ix.in_links(node)) row.term(var_at(l), -1.0);
}

}  // namespace

void add_flow_constraints(ModelIR& m) {
  require_variables(m);
  const ScenarioIndex& ix = m.index;
  const int H = ix.num_hosts();
  const int V = ix.num_nodes();

  // first-microservice hop: source at the workflow starter, sink at the host
  // running position 0
  for (int h = 0; h < H; ++h) {
    for (int w = 0; w < ix.num_workflows(); ++w) {
      const int slot0 = ix.slot(w, 0);
      const bool started_here = ix.starter_host(w) == h;
      for (int i = 0; i < V; ++i) {
        RowBuilder row(m, RowFamily::eq7, RowSense::eq, {i, h, w, -1},
                       (started_here && i == h) ? 1.0 : 0.0);
        flow_balance_terms(ix, row, i, [&](int l) { return m.vars.f(h, slot0, l); });
        if (!ix.node_is_switch(i) && started_here) row.term(m.vars.z(slot0, i), 1.0);
        row.done();
      }
    }
  }

  // response: source at the host running the last position, sink at the
  // workflow starter
  for (int h = 0; h < H; ++h) {
    for (int w = 0; w < ix.num_workflows(); ++w) {
      const int last_slot = ix.slot(w, ix.workflow_len(w) - 1);
      const int starter = ix.starter_host(w);
      for (int i = 0; i < V; ++i) {
        RowBuilder row(m, RowFamily::eq8, RowSense::eq, {i, h, w, -1}, 0.0);
        flow_balance_terms(ix, row, i, [&](int l) { return m.vars.f_resp(h, w, l); });
        if (!ix.node_is_switch(i)) {
          if (i == h && starter != h) row.term(m.vars.z(last_slot, h), -1.0);
          if (i != h && starter == i) row.term(m.vars.z(last_slot, h), 1.0);
        }
        row.done();
      }
    }
  }

  // product variables tying consecutive placements together, plus the hop
  // balance rows that consume them
  for (int p = 0; p < ix.num_pair_slots(); ++p) {
    const int w = ix.pair_slot_workflow(p);
    const int a = ix.pair_slot_position(p);
    const int prev_slot = ix.slot(w, a - 1);
    const int cur_slot = ix.slot(w, a);
    for (int h = 0; h < H; ++h) {
      for (int i = 0; i < H; ++i) {
        const int zp = m.vars.z(prev_slot, h);
        const int zc = m.vars.z(cur_slot, i);
        const int src = m.vars.hop_src(p, h, i);
        const int sink = m.vars.hop_sink(p, h, i);
        const std::array<int32_t, 4> sub{h, i, w, a};
        {
          RowBuilder row(m, RowFamily::eq9, RowSense::le, sub, 0.0);
          row.term(zp, -1.0);
          row.term(src, 1.0);
          row.done();
        }
        {
          RowBuilder row(m, RowFamily::eq10, RowSense::le, sub, 1.0);
          row.term(zc, 1.0);
          row.term(src, 1.0);
          row.done();
        }
        {
          RowBuilder row(m, RowFamily::eq11, RowSense::le, sub, 0.0);
          row.term(zp, 1.0);
          row.term(zc, -1.0);
          row.term(src, -1.0);
          row.done();
        }
        {
          RowBuilder row(m, RowFamily::eq12, RowSense::le, sub, 0.0);
          row.term(zp, -1.0);
          row.term(sink, 1.0);
          row.done();
        }
        {
          RowBuilder row(m, RowFamily::eq13, RowSense::le, sub, 0.0);
          row.term(zc, -1.0);
          row.term(sink, 1.0);
          row.done();
        }
        {
          RowBuilder row(m, RowFamily::eq14, RowSense::le, sub, 1.0);
          row.term(zp, 1.0);
          row.term(zc, 1.0);
          row.term(sink, -1.0);
          row.done();
        }
      }
    }
    for (int h = 0; h < H; ++h) {
      for (int i = 0; i < V; ++i) {
        RowBuilder row(m, RowFamily::eq15, RowSense::eq, {i, h, w, a}, 0.0);
        flow_balance_terms(ix, row, i, [&](int l) { return m.vars.f(h, cur_slot, l); });
        if (!ix.node_is_switch(i)) {
          if (i == h)
            row.term(m.vars.hop_src(p, h, h), -1.0);
          else
            row.term(m.vars.hop_sink(p, h, i), 1.0);
        }
        row.done();
      }
    }
  }
}

void add_control_and_capacity_constraints(ModelIR& m) {
  require_variables(m);
  const ScenarioIndex& ix = m.index;
  const int S = ix.num_switches();
  const int V = ix.num_nodes();

  for (int s = 0; s < S; ++s) {
    const int s_node = ix.switch_node(s);
    for (int i = 0; i < V; ++i) {
      RowBuilder row(m, RowFamily::eq16, RowSense::eq, {i, s, -1, -1},
                     i == s_node ? 1.0 : 0.0);
      flow_balance_terms(ix, row, i, [&](int l) { return m.vars.cf(s, l); });
      if (ix.node_is_switch(i)) row.term(m.vars.y(s, ix.node_switch(i)), 1.0);
      row.done();
    }
  }

  const double omega = static_cast<double>(ix.scenario().control.control_packet_bytes);
  for (int l = 0; l < ix.num_links(); ++l) {
    RowBuilder row(m, RowFamily::eq17, RowSense::le, {l, -1, -1, -1},
                   ix.link(l).capacity_bps);
    for (int h = 0; h < ix.num_hosts(); ++h) {
      for (int slot = 0; slot < ix.num_slots(); ++slot) {
        double demand =
            static_cast<double>(ix.microservice(ix.slot_microservice(slot)).input_bytes);
        row.term(m.vars.f(h, slot, l), demand);
      }
      for (int w = 0; w < ix.num_workflows(); ++w) {
        int last = ix.slot_microservice(ix.slot(w, ix.workflow_len(w) - 1));
        row.term(m.vars.f_resp(h, w, l),
                 static_cast<double>(ix.microservice(last).output_bytes));
      }
    }
    for (int s = 0; s < S; ++s) row.term(m.vars.cf(s, l), omega);
    row.done();
  }
}

void build_objective(ModelIR& m) {
  require_variables(m);
  const ScenarioIndex& ix = m.index;

  for (int slot = 0; slot < ix.num_slots(); ++slot) {
    const double cycles =
        static_cast<double>(ix.microservice(ix.slot_microservice(slot)).workload_cycles);
    for (int h = 0; h < ix.num_hosts(); ++h) {
      const int var = m.vars.z(slot, h);
      if (m.fixed_zero[var]) continue;
      const double coeff = cycles / static_cast<double>(ix.host_cpu_hz(h));
      if (coeff != 0.0) m.objective.push_back({var, coeff});
    }
  }
  for (int h = 0; h < ix.num_hosts(); ++h) {
    for (int slot = 0; slot < ix.num_slots(); ++slot)
      for (int l = 0; l < ix.num_links(); ++l)
        if (ix.link(l).latency_s != 0.0)
          m.objective.push_back({m.vars.f(h, slot, l), ix.link(l).latency_s});
    for (int w = 0; w < ix.num_workflows(); ++w)
      for (int l = 0; l < ix.num_links(); ++l)
        if (ix.link(l).latency_s != 0.0)
          m.objective.push_back({m.vars.f_resp(h, w, l), ix.link(l).latency_s});
  }

  const int S = ix.num_switches();
  if (m.options.control_charge == ControlChargeMode::per_link_constant) {
    // audit form: every link into a switch charges that switch's control
    // path once per (host, workflow) pair, with no traffic gating
    const double pairs =
        static_cast<double>(ix.num_hosts()) * static_cast<double>(ix.num_workflows());
    for (int s = 0; s < S; ++s) {
      const double indeg = static_cast<double>(ix.in_links(ix.switch_node(s)).size());
      for (int l = 0; l < ix.num_links(); ++l) {
        const double coeff = pairs * indeg * ix.link(l).latency_s;
        if (coeff != 0.0) m.objective.push_back({m.vars.cf(s, l), coeff});
      }
    }
  } else {
    // default form: each workflow hop entering switch s is charged s's
    // control-path latency; CtrlCharge(s, l) = CF(l, s) * SwitchHops(s)
    m.aux_upper.assign(m.vars.num_aux(), 0.0);
    const double commodities = static_cast<double>(ix.num_hosts()) *
                               (ix.num_slots() + ix.num_workflows());
    for (int s = 0; s < S; ++s) {
      const int s_node = ix.switch_node(s);
      const double cap = commodities * static_cast<double>(ix.in_links(s_node).size());
      m.aux_upper[m.vars.switch_hops(s) - m.vars.num_binary()] = cap;
      for (int l = 0; l < ix.num_links(); ++l)
        m.aux_upper[m.vars.ctrl_charge(s, l) - m.vars.num_binary()] = cap;

      RowBuilder hops(m, RowFamily::ctrl_hops, RowSense::eq, {s, -1, -1, -1}, 0.0);
      hops.term(m.vars.switch_hops(s), 1.0);
      for (int l : ix.in_links(s_node)) {
        for (int h = 0; h < ix.num_hosts(); ++h) {
          for (int slot = 0; slot < ix.num_slots(); ++slot)
            hops.term(m.vars.f(h, slot, l), -1.0);
          for (int w = 0; w < ix.num_workflows(); ++w)
            hops.term(m.vars.f_resp(h, w, l), -1.0);
        }
      }
      hops.done();

      for (int l = 0; l < ix.num_links(); ++l) {
        const int charge = m.vars.ctrl_charge(s, l);
        const int cfv = m.vars.cf(s, l);
        const int hopsv = m.vars.switch_hops(s);
        {
          RowBuilder row(m, RowFamily::ctrl_charge, RowSense::le, {s, l, 0, -1}, 0.0);
          row.term(charge, 1.0);
          row.term(cfv, -cap);
          row.done();
        }
        {
          RowBuilder row(m, RowFamily::ctrl_charge, RowSense::le, {s, l, 1, -1}, 0.0);
          row.term(charge, 1.0);
          row.term(hopsv, -1.0);
          row.done();
        }
        {
          RowBuilder row(m, RowFamily::ctrl_charge, RowSense::ge, {s, l, 2, -1}, -cap);
          row.term(charge, 1.0);
          row.term(hopsv, -1.0);
          row.term(cfv, -cap);
          row.done();
        }
        if (ix.link(l).latency_s != 0.0)
          m.objective.push_back({charge, ix.link(l).latency_s});
      }
    }
  }
  m.objective_built = true;
}

ModelIR build_model(const Scenario& s, ModelOptions options) {
  ModelIR m = begin_model(s, options);
  build_variables(m);
  add_placement_constraints(m);
  add_controller_constraints(m);
  add_flow_constraints(m);
  add_control_and_capacity_constraints(m);
  build_objective(m);
  return m;
}

std::string ModelIR::var_name(int var_idx) const {
  const VarRef r = vars.ref(var_idx);
  char buf[64];
  const ScenarioIndex& ix = this->index;
  switch (r.kind) {
    case VarKind::Z:
      std::snprintf(buf, sizeof buf, "Z_h%d_w%d_a%d", r.b, ix.slot_workflow(r.a),
                    ix.slot_position(r.a));
      break;
    case VarKind::F:
      std::snprintf(buf, sizeof buf, "F_l%d_h%d_w%d_a%d", r.c, r.a,
                    ix.slot_workflow(r.b), ix.slot_position(r.b));
      break;
    case VarKind::FResp:
      std::snprintf(buf, sizeof buf, "FR_l%d_h%d_w%d", r.c, r.a, r.b);
      break;
    case VarKind::X:
      std::snprintf(buf, sizeof buf, "X_s%d", r.a);
      break;
    case VarKind::Y:
      std::snprintf(buf, sizeof buf, "Y_s%d_t%d", r.a, r.b);
      break;
    case VarKind::CF:
      std::snprintf(buf, sizeof buf, "CF_l%d_s%d", r.b, r.a);
      break;
    case VarKind::HopSrc:
      std::snprintf(buf, sizeof buf, "HSRC_h%d_i%d_w%d_a%d", r.b, r.c,
                    ix.pair_slot_workflow(r.a), ix.pair_slot_position(r.a));
      break;
    case VarKind::HopSink:
      std::snprintf(buf, sizeof buf, "HSNK_h%d_i%d_w%d_a%d", r.b, r.c,
                    ix.pair_slot_workflow(r.a), ix.pair_slot_position(r.a));
      break;
    case VarKind::SwitchHops:
      std::snprintf(buf, sizeof buf, "NHOP_s%d", r.a);
      break;
    case VarKind::CtrlCharge:
      std::snprintf(buf, sizeof buf, "CCHG_s%d_l%d", r.a, r.b);
      break;
    default:
      throw std::logic_error("unhandled variable kind");
  }
  return buf;
}

namespace {

// "X_s3" style tokens: a one-letter prefix and a non-negative integer
bool parse_sub(const std::string& tok, char expect, int& out) {
  if (tok.size() < 2 || tok[0] != expect) return false;
  int value = 0;
  for (size_t i = 1; i < tok.size(); ++i) {
    if (tok[i] < '0' || tok[i] > '9') return false;
    value = value * 10 + (tok[i] - '0');
  }
  out = value;
  return true;
}

std::vector<std::string> split_underscore(const std::string& s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t pos = s.find('_', start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace

int ModelIR::var_by_name(const std::string& name) const {
  const ScenarioIndex& ix = this->index;
  auto toks = split_underscore(name);
  auto bad = [&]() -> int {
    throw std::invalid_argument("unknown variable name: " + name);
  };
  if (toks.empty()) return bad();
  const std::string& tag = toks[0];
  int h = 0, i = 0, w = 0, a = 0, l = 0, s = 0, t = 0;
  auto check = [&](bool ok) {
    if (!ok) bad();
  };
  auto in_range = [&](int v, int n) { return v >= 0 && v < n; };
  if (tag == "Z" && toks.size() == 4) {
    check(parse_sub(toks[1], 'h', h) && parse_sub(toks[2], 'w', w) &&
          parse_sub(toks[3], 'a', a));
    check(in_range(h, ix.num_hosts()) && in_range(w, ix.num_workflows()) &&
          in_range(a, ix.workflow_len(w)));
    return vars.z(ix.slot(w, a), h);
  }
  if (tag == "F" && toks.size() == 5) {
    check(parse_sub(toks[1], 'l', l) && parse_sub(toks[2], 'h', h) &&
          parse_sub(toks[3], 'w', w) && parse_sub(toks[4], 'a', a));
    check(in_range(l, ix.num_links()) && in_range(h, ix.num_hosts()) &&
          in_range(w, ix.num_workflows()) && in_range(a, ix.workflow_len(w)));
    return vars.f(h, ix.slot(w, a), l);
  }
  if (tag == "FR" && toks.size() == 4) {
    check(parse_sub(toks[1], 'l', l) && parse_sub(toks[2], 'h', h) &&
          parse_sub(toks[3], 'w', w));
    check(in_range(l, ix.num_links()) && in_range(h, ix.num_hosts()) &&
          in_range(w, ix.num_workflows()));
    return vars.f_resp(h, w, l);
  }
  if (tag == "X" && toks.size() == 2) {
    check(parse_sub(toks[1], 's', s) && in_range(s, ix.num_switches()));
    return vars.x(s);
  }
  if (tag == "Y" && toks.size() == 3) {
    check(parse_sub(toks[1], 's', s) && parse_sub(toks[2], 't', t));
    check(in_range(s, ix.num_switches()) && in_range(t, ix.num_switches()));
    return vars.y(s, t);
  }
  if (tag == "CF" && toks.size() == 3) {
    check(parse_sub(toks[1], 'l', l) && parse_sub(toks[2], 's', s));
    check(in_range(l, ix.num_links()) && in_range(s, ix.num_switches()));
    return vars.cf(s, l);
  }
  if ((tag == "HSRC" || tag == "HSNK") && toks.size() == 5) {
    check(parse_sub(toks[1], 'h', h) && parse_sub(toks[2], 'i', i) &&
          parse_sub(toks[3], 'w', w) && parse_sub(toks[4], 'a', a));
    check(in_range(h, ix.num_hosts()) && in_range(i, ix.num_hosts()) &&
          in_range(w, ix.num_workflows()) && a >= 1 && a < ix.workflow_len(w));
    int p = ix.pair_slot(w, a);
    return tag == "HSRC" ? vars.hop_src(p, h, i) : vars.hop_sink(p, h, i);
  }
  if (tag == "NHOP" && toks.size() == 2 && vars.has_control_aux()) {
    check(parse_sub(toks[1], 's', s) && in_range(s, ix.num_switches()));
    return vars.switch_hops(s);
  }
  if (tag == "CCHG" && toks.size() == 3 && vars.has_control_aux()) {
    check(parse_sub(toks[1], 's', s) && parse_sub(toks[2], 'l', l));
    check(in_range(s, ix.num_switches()) && in_range(l, ix.num_links()));
    return vars.ctrl_charge(s, l);
  }
  return bad();
}

std::string ModelIR::row_name(const Row& r) const {
  char buf[80];
  const auto& sub = r.sub;
  switch (r.family) {
    case RowFamily::eq1:
      std::snprintf(buf, sizeof buf, "EQ1_w%d_a%d", sub[0], sub[1]);
      break;
    case RowFamily::eq2:
      std::snprintf(buf, sizeof buf, "EQ2_h%d", sub[0]);
      break;
    case RowFamily::eq4:
      std::snprintf(buf, sizeof buf, "EQ4");
      break;
    case RowFamily::eq5:
      std::snprintf(buf, sizeof buf, "EQ5_s%d", sub[0]);
      break;
    case RowFamily::eq6:
      std::snprintf(buf, sizeof buf, "EQ6_s%d_t%d", sub[0], sub[1]);
      break;
    case RowFamily::eq7:
    case RowFamily::eq8:
      std::snprintf(buf, sizeof buf, "%s_i%d_h%d_w%d",
                    std::string(row_family_name(r.family)).c_str(), sub[0], sub[1],
                    sub[2]);
      break;
    case RowFamily::eq9:
    case RowFamily::eq10:
    case RowFamily::eq11:
    case RowFamily::eq12:
    case RowFamily::eq13:
    case RowFamily::eq14:
      std::snprintf(buf, sizeof buf, "%s_h%d_i%d_w%d_a%d",
                    std::string(row_family_name(r.family)).c_str(), sub[0], sub[1],
                    sub[2], sub[3]);
      break;
    case RowFamily::eq15:
      std::snprintf(buf, sizeof buf, "EQ15_i%d_h%d_w%d_a%d", sub[0], sub[1], sub[2],
                    sub[3]);
      break;
    case RowFamily::eq16:
      std::snprintf(buf, sizeof buf, "EQ16_i%d_s%d", sub[0], sub[1]);
      break;
    case RowFamily::eq17:
      std::snprintf(buf, sizeof buf, "EQ17_l%d", sub[0]);
      break;
    case RowFamily::ctrl_hops:
      std::snprintf(buf, sizeof buf, "CTRLH_s%d", sub[0]);
      break;
    case RowFamily::ctrl_charge:
      std::snprintf(buf, sizeof buf, "CTRLC_s%d_l%d_%d", sub[0], sub[1], sub[2]);
      break;
    default:
      throw std::logic_error("unhandled row family");
  }
  return buf;
}

std::vector<double> ModelIR::complete_assignment(std::span<const uint8_t> binaries) const {
  if (static_cast<int>(binaries.size()) != vars.num_binary())
    throw std::invalid_argument("assignment size does not match the model");
  std::vector<double> full(vars.size(), 0.0);
  for (int v = 0; v < vars.num_binary(); ++v) full[v] = binaries[v];
  if (!vars.has_control_aux()) return full;

  const ScenarioIndex& ix = this->index;
  for (int s = 0; s < ix.num_switches(); ++s) {
    double hops = 0.0;
    for (int l : ix.in_links(ix.switch_node(s))) {
      for (int h = 0; h < ix.num_hosts(); ++h) {
        for (int slot = 0; slot < ix.num_slots(); ++slot)
          hops += binaries[vars.f(h, slot, l)];
        for (int w = 0; w < ix.num_workflows(); ++w)
          hops += binaries[vars.f_resp(h, w, l)];
      }
    }
    full[vars.switch_hops(s)] = hops;
    for (int l = 0; l < ix.num_links(); ++l)
      full[vars.ctrl_charge(s, l)] = binaries[vars.cf(s, l)] ? hops : 0.0;
  }
  return full;
}

double ModelIR::objective_value(std::span<const double> full) const {
  double obj = 0.0;
  for (const ObjTerm& t : objective) obj += t.coeff * full[t.var];
  return obj;
}

void ModelIR::fill_hop_products(std::vector<uint8_t>& binaries) const {
  const ScenarioIndex& ix = this->index;
  for (int p = 0; p < ix.num_pair_slots(); ++p) {
    const int w = ix.pair_slot_workflow(p);
    const int a = ix.pair_slot_position(p);
    const int prev_slot = ix.slot(w, a - 1);
    const int cur_slot = ix.slot(w, a);
    for (int h = 0; h < ix.num_hosts(); ++h) {
      const uint8_t zp = binaries[vars.z(prev_slot, h)];
      for (int i = 0; i < ix.num_hosts(); ++i) {
        const uint8_t zc = binaries[vars.z(cur_slot, i)];
        binaries[vars.hop_src(p, h, i)] = zp & static_cast<uint8_t>(1 - zc);
        binaries[vars.hop_sink(p, h, i)] = zp & zc;
      }
    }
  }
}

ResidualReport check_residuals(const ModelIR& m, std::span<const double> full) {
  if (static_cast<int>(full.size()) != m.vars.size())
    throw std::invalid_argument("assignment size does not match the model");

  std::array<FamilyResidual, kNumRowFamilies> acc{};
  for (int f = 0; f < kNumRowFamilies; ++f)
    acc[f].family = static_cast<RowFamily>(f);

  ResidualReport report;
  for (size_t r = 0; r < m.rows.size(); ++r) {
    const Row& row = m.rows[r];
    double lhs = 0.0;
    for (const LinearTerm& t : m.terms(row)) lhs += t.coeff * full[t.var];
    double resid = 0.0;
    switch (row.sense) {
      case RowSense::le: resid = std::max(0.0, lhs - row.rhs); break;
      case RowSense::eq: resid = std::fabs(lhs - row.rhs); break;
      case RowSense::ge: resid = std::max(0.0, row.rhs - lhs); break;
    }
    auto& fam = acc[static_cast<int>(row.family)];
    ++fam.rows;
    if (resid > fam.max_residual) {
      fam.max_residual = resid;
      fam.worst_row = static_cast<int64_t>(r);
    }
    report.max_residual = std::max(report.max_residual, resid);
  }
  for (const auto& fam : acc)
    if (fam.rows > 0) report.families.push_back(fam);

  for (int v = 0; v < m.vars.num_binary(); ++v) {
    const double x = full[v];
    double bad = std::max({0.0, -x, x - 1.0, std::fabs(x - std::round(x))});
    if (m.fixed_zero[v]) bad = std::max(bad, std::fabs(x));
    report.max_bound_violation = std::max(report.max_bound_violation, bad);
  }
  for (int v = m.vars.num_binary(); v < m.vars.size(); ++v) {
    const double x = full[v];
    const double ub = m.aux_upper.empty() ? 0.0 : m.aux_upper[v - m.vars.num_binary()];
    report.max_bound_violation =
        std::max({report.max_bound_violation, -x, x - ub});
  }
  return report;
}

}  // namespace dado
