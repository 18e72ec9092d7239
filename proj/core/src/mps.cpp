#include "dado/mps.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace dado {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

char sense_char(RowSense s) {
  switch (s) {
    case RowSense::le: return 'L';
    case RowSense::eq: return 'E';
    case RowSense::ge: return 'G';
  }
  return '?';
}

}  // namespace

std::string mps_text(const ModelIR& m) {
  if (!m.objective_built)
    throw std::logic_error("model is incomplete; build the objective before exporting");

  std::ostringstream out;
  out << "NAME          DADO\n";
  out << "ROWS\n";
  out << " N  OBJ\n";
  std::vector<std::string> row_names;
  row_names.reserve(m.rows.size());
  for (const Row& r : m.rows) {
    row_names.push_back(m.row_name(r));
    out << " " << sense_char(r.sense) << "  " << row_names.back() << "\n";
  }

  // column-major coefficient lists, one entry per line
  std::vector<std::vector<std::pair<int, double>>> by_col(m.num_vars());
  for (size_t ri = 0; ri < m.rows.size(); ++ri) {
    for (const LinearTerm& t : m.terms(m.rows[ri]))
      by_col[t.var].push_back({static_cast<int>(ri), t.coeff});
  }
  std::vector<double> obj_coeff(m.num_vars(), 0.0);
  for (const ObjTerm& t : m.objective) obj_coeff[t.var] += t.coeff;

  out << "COLUMNS\n";
  for (int v = 0; v < m.num_vars(); ++v) {
    const std::string name = m.var_name(v);
    if (obj_coeff[v] != 0.0)
      out << "    " << name << "  OBJ  " << num(obj_coeff[v]) << "\n";
    for (const auto& [row, coeff] : by_col[v])
      out << "    " << name << "  " << row_names[row] << "  " << num(coeff) << "\n";
  }

  out << "RHS\n";
  for (size_t ri = 0; ri < m.rows.size(); ++ri) {
    if (m.rows[ri].rhs != 0.0)
      out << "    RHS1  " << row_names[ri] << "  " << num(m.rows[ri].rhs) << "\n";
  }

  out << "BOUNDS\n";
  for (int v = 0; v < m.vars.num_binary(); ++v) {
    if (m.fixed_zero[v])
      out << " FX BND1  " << m.var_name(v) << "  0\n";
    else
      out << " BV BND1  " << m.var_name(v) << "\n";
  }
  for (int v = m.vars.num_binary(); v < m.num_vars(); ++v) {
    out << " UP BND1  " << m.var_name(v) << "  "
        << num(m.aux_upper[v - m.vars.num_binary()]) << "\n";
  }
  out << "ENDATA\n";
  return out.str();
}

void export_mps(const ModelIR& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << mps_text(m);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::string family_of(const std::string& row_name) {
  size_t pos = row_name.find('_');
  return pos == std::string::npos ? row_name : row_name.substr(0, pos);
}

}  // namespace

ParsedMps parse_mps(const std::string& text) {
  ParsedMps mps;
  std::istringstream in(text);
  std::string line;
  enum Section { none, rows, columns, rhs, ranges, bounds, done } section = none;
  std::set<std::string> seen_cols;
  bool ended = false;

  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '*') continue;
    if (line[0] != ' ' && line[0] != '\t') {
      auto t = tokens(line);
      if (t.empty()) continue;
      const std::string& head = t[0];
      if (head == "NAME") {
        if (t.size() > 1) mps.name = t[1];
      } else if (head == "ROWS") {
        section = rows;
      } else if (head == "COLUMNS") {
        section = columns;
      } else if (head == "RHS") {
        section = rhs;
      } else if (head == "RANGES") {
        section = ranges;
      } else if (head == "BOUNDS") {
        section = bounds;
      } else if (head == "ENDATA") {
        section = done;
        ended = true;
      } else {
        throw std::runtime_error("mps: unknown section header: " + head);
      }
      continue;
    }
    auto t = tokens(line);
    if (t.empty()) continue;
    switch (section) {
      case rows: {
        if (t.size() != 2) throw std::runtime_error("mps: malformed ROWS line: " + line);
        char sense = static_cast<char>(std::toupper(t[0][0]));
        if (sense == 'N') {
          mps.objective_row = t[1];
        } else if (sense == 'L' || sense == 'G' || sense == 'E') {
          mps.rows.push_back({t[1], sense});
          ++mps.rows_per_family[family_of(t[1])];
        } else {
          throw std::runtime_error("mps: bad row sense: " + line);
        }
        break;
      }
      case columns: {
        // markers (INTORG/INTEND) would appear here; this writer relies on
        // BV bounds instead, but skip them if another tool added some
        if (t.size() >= 3 && t[1] == "'MARKER'") break;
        if (t.size() != 3 && t.size() != 5)
          throw std::runtime_error("mps: malformed COLUMNS line: " + line);
        if (seen_cols.insert(t[0]).second) mps.columns.push_back(t[0]);
        for (size_t k = 1; k + 1 < t.size(); k += 2) {
          std::stod(t[k + 1]);  // throws on malformed numbers
          ++mps.num_entries;
        }
        break;
      }
      case rhs: {
        if (t.size() != 3 && t.size() != 5)
          throw std::runtime_error("mps: malformed RHS line: " + line);
        for (size_t k = 1; k + 1 < t.size(); k += 2)
          mps.rhs[t[k]] = std::stod(t[k + 1]);
        break;
      }
      case ranges:
        break;  // not produced by this writer
      case bounds: {
        if (t.size() < 3) throw std::runtime_error("mps: malformed BOUNDS line: " + line);
        ParsedMps::Bound b;
        b.type = t[0];
        b.column = t[2];
        if (t.size() > 3) b.value = std::stod(t[3]);
        if (seen_cols.insert(b.column).second) mps.columns.push_back(b.column);
        mps.bounds.push_back(std::move(b));
        break;
      }
      case none:
        throw std::runtime_error("mps: data before any section header");
      case done:
        break;
    }
  }
  if (!ended) throw std::runtime_error("mps: missing ENDATA");
  return mps;
}

ParsedMps read_mps(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open mps file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_mps(buf.str());
}

}  // namespace dado
