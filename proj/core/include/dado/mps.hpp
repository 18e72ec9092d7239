#pragma once
// MPS writer and a small reader used for round-trip checks. The writer
// emits classic column-oriented MPS that is also valid free-form: ROWS,
// COLUMNS, RHS, BOUNDS, ENDATA. Binary variables are declared through BV
// bound records (FX 0 when a variable is pinned); the continuous control
// auxiliaries get UP bounds. Row names carry the constraint family tags.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dado/model.hpp"

namespace dado {

void export_mps(const ModelIR& m, const std::filesystem::path& path);
std::string mps_text(const ModelIR& m);

struct ParsedMps {
  std::string name;
  struct RowDecl {
    std::string name;
    char sense;  // N, L, G, E
  };
  std::vector<RowDecl> rows;                       // excluding the objective
  std::string objective_row;
  std::vector<std::string> columns;                // first-seen order
  int64_t num_entries = 0;                         // COLUMNS coefficients
  std::map<std::string, int64_t> rows_per_family;  // tag prefix -> count
  std::map<std::string, double> rhs;
  struct Bound {
    std::string type;  // BV, FX, UP, LO
    std::string column;
    double value = 0.0;
  };
  std::vector<Bound> bounds;

  int64_t num_rows() const { return static_cast<int64_t>(rows.size()); }
  int64_t num_columns() const { return static_cast<int64_t>(columns.size()); }
};

ParsedMps read_mps(const std::filesystem::path& path);
ParsedMps parse_mps(const std::string& text);

}  // namespace dado
