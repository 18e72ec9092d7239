#pragma once
// Solver backends over the model IR:
//   solve_oracle  exhaustive enumeration of placements, controller choices
//                 and flow supports; exact, only for very small models.
//   solve_bnb     structured branch-and-bound over controller subsets and
//                 placements; per-commodity shortest-path routing with
//                 k-shortest rerouting when a link capacity binds.
// External solvers are integrated through files only: export_mps plus a
// name=value solution format (write_solution_file / import_solution).

#include <filesystem>
#include <string>
#include <vector>

#include "dado/model.hpp"

namespace dado {

enum class SolveStatus { Optimal, Feasible, Infeasible, TimeLimit };

std::string_view to_string(SolveStatus s);
SolveStatus solve_status_from_string(const std::string& s);

struct DeploymentSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective_value = 0.0;           // seconds; meaningful when feasible
  double best_bound = 0.0;                // lower bound proved by the solver
  double gap = 0.0;                       // (objective - bound) / max(objective, eps)
  std::vector<uint8_t> assignment;        // dense binaries, model order
  std::string solver;
  double wall_time_s = 0.0;
  std::string scenario_fingerprint;
  ControlChargeMode control_charge = ControlChargeMode::per_hop;

  bool feasible() const {
    return status == SolveStatus::Optimal || status == SolveStatus::Feasible;
  }
  double value(const ModelIR& m, VarKind kind, int a, int b = -1, int c = -1) const;
};

struct SolverConfig {
  double time_limit_s = 300.0;
  double optimality_gap = 0.0;  // relative; 0 demands proven optimality
  int oracle_var_limit = 32;    // free Z/X/Y binaries the oracle will enumerate
  uint64_t seed = 0;

  void check() const;
};

struct var_limit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

DeploymentSolution solve_oracle(const ModelIR& m, const SolverConfig& cfg = {});
DeploymentSolution solve_bnb(const ModelIR& m, const SolverConfig& cfg = {});

// name=value solution file (see docs/file_formats.md)
void write_solution_file(const ModelIR& m, const DeploymentSolution& sol,
                         const std::filesystem::path& path);

struct ImportedSolution {
  DeploymentSolution solution;
  ResidualReport feasibility;  // an infeasible import is reported, not rejected
};

ImportedSolution import_solution(const ModelIR& m, const std::filesystem::path& path);

// JSON solution document used by the command line tool
void save_solution_json(const ModelIR& m, const DeploymentSolution& sol,
                        const std::filesystem::path& path);
DeploymentSolution load_solution_json(const ModelIR& m,
                                      const std::filesystem::path& path);

}  // namespace dado
