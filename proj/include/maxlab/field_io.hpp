#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "maxlab/grid.hpp"

namespace maxlab {

/// Malformed field file; the message names the file and the 1-based line.
class FieldIoError : public std::runtime_error {
 public:
  FieldIoError(const std::string& file, std::size_t line, const std::string& what);
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

// Field CSV layout:
//   # maxlab-grid {"group":"euclidean","n":1,"lo":[...],"hi":[...],"points":[...]}
//   x0,x1,...,value
//   one row per node in lexicographic node order, values printed with %.17g.

void write_field_csv(std::ostream& os, const SampledField& f);
void write_field_csv(const std::filesystem::path& path, const SampledField& f);

/// Reads a field; the grid is rebuilt from the descriptor line. When `expect`
/// is given the descriptor must describe the same layout and the returned
/// field shares that grid.
SampledField read_field_csv(const std::filesystem::path& path, const GridPtr& expect = nullptr);
SampledField read_field_csv(std::istream& is, const std::string& name, const GridPtr& expect = nullptr);

GridPtr grid_from_descriptor(const std::string& json_text);

std::string format_double(double v);

}  // namespace maxlab
