#pragma once
// Solver-agnostic mixed-integer model for the joint microservice placement,
// controller placement and routing problem.
//
// Binary decision variables:
//   Z(h, w, a)        host h runs chain position a of workflow w
//   F(l, h, w, a)     hop traffic generated by h for (w, a) uses link l
//   FResp(l, h, w)    response traffic generated by h for w uses link l
//   X(s)              a controller is placed on switch s
//   Y(s, t)           switch s is mapped to the controller on switch t
//   CF(l, s)          control traffic of switch s uses link l
//   HopSrc(h, i, w, a)  product z[h, a-1] * (1 - z[i, a]); diagonal entries
//                       (i == h) act as flow sources in the hop balance rows
//   HopSink(h, i, w, a) product z[h, a-1] * z[i, a]; flow sinks
//
// Continuous auxiliaries (default control-charge mode only):
//   SwitchHops(s)     number of workflow hops whose head is switch s
//   CtrlCharge(s, l)  CF(l, s) * SwitchHops(s), pinned by big-M rows
//
// Constraint rows carry a family tag and their subscripts, so exported row
// names stay auditable. Terms with coefficient zero are omitted.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dado/infra.hpp"

namespace dado {

enum class VarKind : uint8_t {
  Z,
  F,
  FResp,
  X,
  Y,
  CF,
  HopSrc,
  HopSink,
  SwitchHops,
  CtrlCharge,
};

struct VarRef {
  VarKind kind;
  // kind-specific subscripts, dense indices:
  //   Z: (slot, h)   F: (h, slot, l)   FResp: (h, w, l)   X: (s)   Y: (s, t)
  //   CF: (s, l)     HopSrc/HopSink: (pslot, h, i)
  //   SwitchHops: (s)   CtrlCharge: (s, l)
  int32_t a = -1, b = -1, c = -1;
};

// Bijection between (kind, subscripts) and a dense variable index. Binaries
// come first; the control-charge auxiliaries (when enabled) follow.
class VarTable {
 public:
  VarTable() = default;
  VarTable(const ScenarioIndex& ix, bool control_aux);

  int num_binary() const { return num_binary_; }
  int num_aux() const { return num_aux_; }
  int size() const { return num_binary_ + num_aux_; }
  bool has_control_aux() const { return num_aux_ > 0; }
  int64_t count(VarKind kind) const;

  int z(int slot, int h) const { return slot * H_ + h; }
  int f(int h, int slot, int l) const { return off_f_ + (h * nslots_ + slot) * L_ + l; }
  int f_resp(int h, int w, int l) const { return off_fr_ + (h * W_ + w) * L_ + l; }
  int x(int s) const { return off_x_ + s; }
  int y(int s, int t) const { return off_y_ + s * S_ + t; }
  int cf(int s, int l) const { return off_cf_ + s * L_ + l; }
  int hop_src(int pslot, int h, int i) const {
    return off_hsrc_ + (pslot * H_ + h) * H_ + i;
  }
  int hop_sink(int pslot, int h, int i) const {
    return off_hsink_ + (pslot * H_ + h) * H_ + i;
  }
  int switch_hops(int s) const { return off_hops_ + s; }
  int ctrl_charge(int s, int l) const { return off_charge_ + s * L_ + l; }

  VarRef ref(int index) const;

 private:
  int H_ = 0, S_ = 0, L_ = 0, W_ = 0, nslots_ = 0, npslots_ = 0;
  int off_f_ = 0, off_fr_ = 0, off_x_ = 0, off_y_ = 0, off_cf_ = 0;
  int off_hsrc_ = 0, off_hsink_ = 0, off_hops_ = 0, off_charge_ = 0;
  int num_binary_ = 0, num_aux_ = 0;
};

enum class RowFamily : uint8_t {
  eq1, eq2, eq4, eq5, eq6, eq7, eq8,
  eq9, eq10, eq11, eq12, eq13, eq14, eq15, eq16, eq17,
  ctrl_hops, ctrl_charge,
};
constexpr int kNumRowFamilies = 18;

std::string_view row_family_name(RowFamily f);

enum class RowSense : uint8_t { le, eq, ge };

struct LinearTerm {
  int32_t var;
  double coeff;
};

struct Row {
  RowFamily family;
  RowSense sense;
  std::array<int32_t, 4> sub{-1, -1, -1, -1};
  double rhs = 0.0;
  uint32_t begin = 0, end = 0;  // range into ModelIR::pool
};

// How the objective charges control-plane latency.
//   per_hop (default): each workflow hop entering a switch is charged that
//     switch's control-path latency, linearized through the CtrlCharge
//     auxiliaries.
//   per_link_constant: audit variant; every link into a switch contributes
//     the switch's control-path latency once per (host, workflow) pair,
//     independent of traffic.
enum class ControlChargeMode { per_hop, per_link_constant };

struct ModelOptions {
  ControlChargeMode control_charge = ControlChargeMode::per_hop;
};

std::string_view to_string(ControlChargeMode m);
ControlChargeMode control_charge_from_string(const std::string& s);

struct ObjTerm {
  int32_t var;
  double coeff;
};

struct ModelIR {
  ScenarioIndex index;  // owns a copy of the scenario
  ModelOptions options;
  VarTable vars;
  std::vector<uint8_t> fixed_zero;  // per binary: variable pinned to 0
  std::vector<LinearTerm> pool;
  std::vector<Row> rows;
  std::vector<ObjTerm> objective;
  std::vector<double> aux_upper;  // per auxiliary, in table order

  bool variables_built = false;
  bool objective_built = false;

  const Scenario& scenario() const { return index.scenario(); }
  int num_vars() const { return vars.size(); }
  int num_binary() const { return vars.num_binary(); }
  int64_t rows_in_family(RowFamily f) const;

  std::span<const LinearTerm> terms(const Row& r) const {
    return {pool.data() + r.begin, pool.data() + r.end};
  }

  std::string var_name(int index) const;
  int var_by_name(const std::string& name) const;  // throws on unknown names
  std::string row_name(const Row& r) const;

  // Extends a binary assignment with the implied auxiliary values.
  std::vector<double> complete_assignment(std::span<const uint8_t> binaries) const;
  double objective_value(std::span<const double> full) const;

  // Derives HopSrc/HopSink values from the Z part of an assignment.
  void fill_hop_products(std::vector<uint8_t>& binaries) const;
};

// Staged builders. build_model runs them all; the stages are exposed so the
// per-family structure can be inspected and tested in isolation.
ModelIR begin_model(const Scenario& s, ModelOptions options = {});
void build_variables(ModelIR& m);
void add_placement_constraints(ModelIR& m);
void add_controller_constraints(ModelIR& m);
void add_flow_constraints(ModelIR& m);
void add_control_and_capacity_constraints(ModelIR& m);
void build_objective(ModelIR& m);

ModelIR build_model(const Scenario& s, ModelOptions options = {});

// Residuals of every row for a full assignment (binaries + auxiliaries).
// residual = max(0, lhs - rhs) for <=, |lhs - rhs| for ==, max(0, rhs - lhs)
// for >=. Bound violations cover binaries outside {0,1} up to round-off,
// fixed variables that are nonzero, and auxiliaries outside [0, upper].
struct FamilyResidual {
  RowFamily family;
  int64_t rows = 0;
  double max_residual = 0.0;
  int64_t worst_row = -1;
};

struct ResidualReport {
  std::vector<FamilyResidual> families;  // families with at least one row
  double max_residual = 0.0;
  double max_bound_violation = 0.0;
  bool within(double tol) const {
    return max_residual <= tol && max_bound_violation <= tol;
  }
};

ResidualReport check_residuals(const ModelIR& m, std::span<const double> full);

}  // namespace dado
