#pragma once

#include <iosfwd>
#include <string>

#include "choqmax/grid.hpp"

namespace choqmax {

// Grid-function file: line 1 is `n,L`, line 2 holds 2^(nL) comma-separated
// nonnegative decimal values in row-major cell order. A cell-set file has the
// same header and one line of 0/1 flags. Parse failures throw ParseError with
// the offending line number; values are written with %.17g so files round-trip
// bit for bit.

GridFunction read_grid_function(std::istream& in, const std::string& source_name = "<stream>");
GridFunction read_grid_function_file(const std::string& path);
void write_grid_function(std::ostream& out, const GridFunction& f);
void write_grid_function_file(const std::string& path, const GridFunction& f);

CellSet read_cell_set(std::istream& in, const std::string& source_name = "<stream>");
CellSet read_cell_set_file(const std::string& path);
void write_cell_set(std::ostream& out, const CellSet& set);
void write_cell_set_file(const std::string& path, const CellSet& set);

std::string format_value(double v);  // %.17g

}  // namespace choqmax
