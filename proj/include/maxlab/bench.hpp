#pragma once

#include <string>
#include <vector>

#include "maxlab/config.hpp"
#include "maxlab/grid.hpp"

namespace maxlab {

struct BenchResult {
  std::string kernel;   // operator name
  std::string backend;  // fast | reference
  std::size_t nodes = 0;
  std::size_t family = 0;
  double wall_time = 0.0;        // seconds
  double node_throughput = 0.0;  // nodes per second
  double checksum = 0.0;         // sum of output values in node order
};

struct BenchReport {
  std::vector<BenchResult> rows;
  std::vector<std::string> mismatches;  // kernels whose fast and reference checksums differ
  std::vector<std::string> notes;
  bool ok() const { return mismatches.empty(); }
  std::string to_csv() const;
};

double checksum(const SampledField& f);

/// Times every operator on the configured grid. The reference backend runs
/// only when the grid has at most oracle_limit nodes.
BenchReport run_bench(const RunConfig& cfg, std::size_t oracle_limit = 5000);

}  // namespace maxlab
