#include "speclab/table.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace speclab {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void ResultTable::add_row(std::vector<Cell> cells) {
  if (cells.size() != columns.size())
    throw ValidationError("table: row width does not match column count");
  if (!rows.empty()) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (cells[i].is_complex != rows.front()[i].is_complex)
        throw ValidationError("table: mixed real/complex entries in column " + columns[i]);
  }
  rows.push_back(std::move(cells));
}

void ResultTable::validate() const {
  std::set<std::string> seen(columns.begin(), columns.end());
  if (seen.size() != columns.size())
    throw ValidationError("table: duplicate column names");
  for (const auto& r : rows)
    if (r.size() != columns.size()) throw ValidationError("table: ragged rows");
}

void emit_table_csv(const ResultTable& t, const std::string& path) {
  t.validate();
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << "# " << t.provenance << "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    const bool cx = !t.rows.empty() && t.rows.front()[c].is_complex;
    if (c) out << ",";
    if (cx) out << t.columns[c] << "_re," << t.columns[c] << "_im";
    else out << t.columns[c];
  }
  out << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) out << ",";
      if (r[c].is_complex) out << format17(r[c].re) << "," << format17(r[c].im);
      else out << format17(r[c].re);
    }
    out << "\n";
  }
  if (!out) throw ValidationError("write failure on '" + path + "'");
}

void emit_table_json(const ResultTable& t, const std::string& path) {
  t.validate();
  nlohmann::json j;
  j["provenance"] = t.provenance;
  j["columns"] = t.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& c : r) {
      if (c.is_complex) row.push_back({c.re, c.im});
      else row.push_back(c.re);
    }
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) throw ValidationError("write failure on '" + path + "'");
}

ResultTable read_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  ResultTable t;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty CSV '" + path + "'");
  if (line.rfind("# ", 0) == 0) {
    t.provenance = line.substr(2);
    if (!std::getline(in, line)) throw ValidationError("CSV '" + path + "' has no header");
  }

  // reconstruct columns, folding name_re/name_im pairs back into one column
  std::vector<std::string> raw;
  {
    std::istringstream is(line);
    std::string tok;
    while (std::getline(is, tok, ',')) raw.push_back(tok);
  }
  std::vector<bool> complex_col;
  for (std::size_t i = 0; i < raw.size();) {
    const auto& name = raw[i];
    if (name.size() > 3 && name.substr(name.size() - 3) == "_re" && i + 1 < raw.size() &&
        raw[i + 1] == name.substr(0, name.size() - 3) + "_im") {
      t.columns.push_back(name.substr(0, name.size() - 3));
      complex_col.push_back(true);
      i += 2;
    } else {
      t.columns.push_back(name);
      complex_col.push_back(false);
      ++i;
    }
  }

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    std::istringstream is(line);
    std::string tok;
    while (std::getline(is, tok, ',')) vals.push_back(std::stod(tok));
    std::vector<ResultTable::Cell> row;
    std::size_t k = 0;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (complex_col[c]) {
        row.push_back(ResultTable::complex(cplx(vals.at(k), vals.at(k + 1))));
        k += 2;
      } else {
        row.push_back(ResultTable::real(vals.at(k)));
        k += 1;
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace speclab
