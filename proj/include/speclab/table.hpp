#pragma once

#include <string>

#include "speclab/common.hpp"

namespace speclab {

// Rectangular table of real/complex scalars with named columns. Complex
// columns are serialized as paired `_re`/`_im` CSV columns; all numerics
// carry 17 significant digits so a read-back is bit-identical.
struct ResultTable {
  struct Cell {
    double re = 0.0;
    double im = 0.0;
    bool is_complex = false;
  };

  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::string provenance;  // subcommand + config hash

  static Cell real(double v) { return {v, 0.0, false}; }
  static Cell complex(cplx v) { return {v.real(), v.imag(), true}; }

  void add_row(std::vector<Cell> cells);
  void validate() const;  // rectangular, unique column names
};

std::string format17(double v);

void emit_table_csv(const ResultTable& t, const std::string& path);
void emit_table_json(const ResultTable& t, const std::string& path);
ResultTable read_table_csv(const std::string& path);

}  // namespace speclab
