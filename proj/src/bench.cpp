#include "maxlab/bench.hpp"

#include <chrono>
#include <sstream>

#include "maxlab/corpus.hpp"
#include "maxlab/field_io.hpp"
#include "maxlab/maximal.hpp"

namespace maxlab {

double checksum(const SampledField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s;
}

std::string BenchReport::to_csv() const {
  std::ostringstream os;
  os << "kernel,backend,nodes,family,wall_time,node_throughput,checksum\n";
  for (const auto& r : rows)
    os << r.kernel << ',' << r.backend << ',' << r.nodes << ',' << r.family << ',' << format_double(r.wall_time) << ','
       << format_double(r.node_throughput) << ',' << format_double(r.checksum) << '\n';
  return os.str();
}

BenchReport run_bench(const RunConfig& cfg, std::size_t oracle_limit) {
  const GridPtr grid = build_grid(cfg);
  const BallFamily fam = BallFamily::generate(*grid, cfg.family);
  const auto f = generate_field(CorpusTag{"random-smooth", 1.0}, grid, cfg.seed);
  const auto b = generate_field(CorpusTag{"random-smooth", 2.0}, grid, cfg.seed);
  const bool oracle = grid->node_count() <= oracle_limit;
  BenchReport rep;
  if (!oracle)
    rep.notes.push_back("reference backend skipped: " + std::to_string(grid->node_count()) + " nodes exceed " +
                        std::to_string(oracle_limit));
  for (auto op : {OperatorKind::maximal, OperatorKind::sharp, OperatorKind::maximal_commutator,
                  OperatorKind::commutator_maximal, OperatorKind::commutator_sharp}) {
    double sums[2] = {0.0, 0.0};
    for (Backend be : {Backend::fast, Backend::reference}) {
      if (be == Backend::reference && !oracle) continue;
      const auto t0 = std::chrono::steady_clock::now();
      const SampledField out = apply_operator(op, be, &b, f, fam, cfg.alpha);
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      BenchResult r;
      r.kernel = std::string(operator_name(op));
      r.backend = be == Backend::fast ? "fast" : "reference";
      r.nodes = grid->node_count();
      r.family = fam.size();
      r.wall_time = wall;
      r.node_throughput = wall > 0.0 ? static_cast<double>(r.nodes) / wall : 0.0;
      r.checksum = checksum(out);
      sums[be == Backend::fast ? 0 : 1] = r.checksum;
      rep.rows.push_back(r);
    }
    if (oracle && sums[0] != sums[1]) rep.mismatches.push_back(std::string(operator_name(op)));
  }
  return rep;
}

}  // namespace maxlab
