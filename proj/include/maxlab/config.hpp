#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "maxlab/ball_family.hpp"
#include "maxlab/grid.hpp"
#include "maxlab/young.hpp"

namespace maxlab {

/// Invalid or unreadable run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double identity = 1e-12;   // relative, exact maximal identities
  double pointwise = 1e-9;   // absolute, pointwise commutator inequalities
  double holder = 1e-6;      // relative, Holder and conjugate-pair bounds
  double norm = 1e-9;        // relative, norm laws and weak <= strong
};

struct AlmostDecreasingControl {
  std::optional<YoungFunction> psi;  // absent: Psi built from the first Young function
  double eps = 0.5;
  double k_threshold = 10.0;
};

struct CharacConfig {
  std::string b = "gauge-power(0.5)";
  int probes = 10;
  bool operator_ratios = true;
};

/// Parsed run configuration. JSON layout:
///   group      {"kind": "euclidean"|"heisenberg1", "n": 1, optional "c1", "c0", "calibration_resolution"}
///   grid       {"lo": [...], "hi": [...], "points": [...]}
///   young      [{"kind": "power", "p": 2}, {"kind": "linfty"},
///               {"kind": "tabulated", "csv": "phi.csv", "lower_exponent": 2, "upper_exponent": 2}]
///   family     {"center_stride", "r_min", "ratio", "count", "cover"}
///   corpus     ["indicator", "gauge-power(0.5)", ...]
///   beta, alpha, seed, pairs, output_dir
///   tolerances {"identity", "pointwise", "holder", "norm"}
///   fields     {"b": "b.csv", "f": "f.csv"}  (paths relative to the config file)
///   almost_decreasing {"psi": {...}, "eps": 0.5, "k_threshold": 10}
///   charac     {"b": "gauge-power(0.5)", "probes": 10, "operator_ratios": true}
struct RunConfig {
  GroupSpec group = GroupSpec::euclidean(1);
  std::vector<double> lo{-1.0};
  std::vector<double> hi{1.0};
  std::vector<int> points{1025};
  std::vector<YoungFunction> young;
  FamilyParams family{.center_stride = 8, .r_min = 0.0, .ratio = std::numbers::sqrt2, .count = 0, .cover = true};
  std::vector<std::string> corpus;
  double beta = 0.5;
  double alpha = 0.0;
  std::uint64_t seed = 1;
  int pairs = 20;
  std::filesystem::path output_dir = "out";
  Tolerances tol;
  std::map<std::string, std::filesystem::path> fields;
  AlmostDecreasingControl almost_decreasing;
  CharacConfig charac;
};

/// 1-D Euclidean default: [-1, 1] with 1025 nodes.
RunConfig default_config();

RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

YoungFunction young_from_json(std::string_view json_text, const std::filesystem::path& base_dir = {});

/// Resolution cap per axis for a grid of the given dimension.
int max_points_per_axis(int dim);

/// small halves and large doubles the cell count per axis; throws ConfigError
/// when the result breaks the resolution limits.
void apply_grid_scale(RunConfig& cfg, std::string_view scale);

/// Calibrates the group when the config carries no constants and builds the grid.
GridPtr build_grid(const RunConfig& cfg);

/// Reads config.fields[name] against the config grid; throws FieldIoError.
std::optional<SampledField> load_named_field(const RunConfig& cfg, const std::string& name, const GridPtr& grid);

}  // namespace maxlab
