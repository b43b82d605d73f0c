#include "maxlab/field_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace maxlab {

namespace {

constexpr std::string_view kDescriptorTag = "# maxlab-grid ";

bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

FieldIoError::FieldIoError(const std::string& file, std::size_t line, const std::string& what)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + what), file_(file), line_(line) {}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

GridPtr grid_from_descriptor(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  const std::string kind = j.at("group").get<std::string>();
  GroupSpec group = kind == "heisenberg1" ? GroupSpec::heisenberg1()
                    : kind == "euclidean"  ? GroupSpec::euclidean(j.at("n").get<int>())
                                           : throw std::invalid_argument("unknown group '" + kind + "'");
  return make_grid(group, j.at("lo").get<std::vector<double>>(), j.at("hi").get<std::vector<double>>(),
                   j.at("points").get<std::vector<int>>());
}

void write_field_csv(std::ostream& os, const SampledField& f) {
  const GridSpec& g = f.grid();
  os << kDescriptorTag << g.descriptor() << '\n';
  for (int k = 0; k < g.dim(); ++k) os << 'x' << k << ',';
  os << "value\n";
  std::vector<double> x(static_cast<std::size_t>(g.dim()));
  for (std::size_t i = 0; i < f.size(); ++i) {
    g.node_coords(i, x.data());
    for (double c : x) os << format_double(c) << ',';
    os << format_double(f[i]) << '\n';
  }
}

void write_field_csv(const std::filesystem::path& path, const SampledField& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_field_csv(os, f);
}

SampledField read_field_csv(std::istream& is, const std::string& name, const GridPtr& expect) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(is, line) || line.rfind(kDescriptorTag, 0) != 0)
    throw FieldIoError(name, lineno, "missing '# maxlab-grid' descriptor line");
  GridPtr grid;
  try {
    grid = grid_from_descriptor(line.substr(kDescriptorTag.size()));
  } catch (const std::exception& e) {
    throw FieldIoError(name, lineno, std::string("bad grid descriptor: ") + e.what());
  }
  if (expect) {
    if (!expect->same_layout(*grid)) throw FieldIoError(name, lineno, "grid differs from the configured grid");
    grid = expect;
  }
  ++lineno;
  if (!std::getline(is, line)) throw FieldIoError(name, lineno, "missing header row");
  const auto dim = static_cast<std::size_t>(grid->dim());
  std::vector<double> values(grid->node_count());
  std::vector<double> node(dim);
  for (std::size_t i = 0; i < values.size(); ++i) {
    ++lineno;
    if (!std::getline(is, line))
      throw FieldIoError(name, lineno, "expected " + std::to_string(values.size()) + " rows, got " +
                                           std::to_string(i));
    std::vector<double> cols;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const auto cell = std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      double v;
      if (!parse_double(cell, v)) throw FieldIoError(name, lineno, "unparsable number '" + std::string(cell) + "'");
      cols.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cols.size() != dim + 1)
      throw FieldIoError(name, lineno, "expected " + std::to_string(dim + 1) + " columns");
    grid->node_coords(i, node.data());
    for (std::size_t k = 0; k < dim; ++k) {
      const double tol = 1e-9 * std::max(1.0, std::abs(node[k]));
      if (std::abs(cols[k] - node[k]) > tol)
        throw FieldIoError(name, lineno, "coordinates do not match node " + std::to_string(i));
    }
    if (!std::isfinite(cols.back())) throw FieldIoError(name, lineno, "non-finite value");
    values[i] = cols.back();
  }
  return SampledField(grid, std::move(values));
}

SampledField read_field_csv(const std::filesystem::path& path, const GridPtr& expect) {
  std::ifstream is(path);
  if (!is) throw FieldIoError(path.string(), 0, "cannot open file");
  return read_field_csv(is, path.string(), expect);
}

}  // namespace maxlab
