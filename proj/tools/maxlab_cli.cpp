// maxlab: run-config driven front end for the maximal-operator toolkit.
// Exit codes: 0 success, 1 failed check or checksum mismatch, 2 bad config
// or field input (nothing is written in that case).

#include <omp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "maxlab/bench.hpp"
#include "maxlab/config.hpp"
#include "maxlab/corpus.hpp"
#include "maxlab/field_io.hpp"
#include "maxlab/lipschitz.hpp"
#include "maxlab/maximal.hpp"
#include "maxlab/orlicz.hpp"
#include "maxlab/verify.hpp"

namespace fs = std::filesystem;
using namespace maxlab;
using ojson = nlohmann::ordered_json;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string grid_scale = "default";
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Files are staged in memory and written only once the command succeeded.
struct Outputs {
  fs::path dir;
  std::vector<std::pair<std::string, std::string>> files;
  void add(std::string name, std::string body) { files.emplace_back(std::move(name), std::move(body)); }
  void flush() const {
    fs::create_directories(dir);
    for (const auto& [name, body] : files) {
      std::ofstream os(dir / name, std::ios::binary);
      os << body;
      if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
    }
  }
};

RunConfig load(const Common& c) {
  RunConfig cfg = c.config.empty() ? default_config() : load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  apply_grid_scale(cfg, c.grid_scale);
  if (!c.out.empty()) cfg.output_dir = c.out;
  return cfg;
}

// An existing file is read as a field CSV; anything else is a corpus tag.
SampledField field_input(const std::string& spec, const GridPtr& grid, std::uint64_t seed) {
  if (fs::exists(spec)) return read_field_csv(spec, grid);
  try {
    return generate_field(spec, grid, seed);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("field input '") + spec + "' is neither a file nor a corpus tag: " + e.what());
  }
}

ojson norm_json(const NormResult& r) {
  ojson j;
  j["value"] = r.value;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  return j;
}

std::string field_csv(const SampledField& f) {
  std::ostringstream os;
  write_field_csv(os, f);
  return os.str();
}

int cmd_verify(const Common& c) {
  const RunConfig cfg = load(c);
  const VerifyReport rep = run_verify(cfg);
  for (const auto& chk : rep.checks)
    std::cout << (chk.passed ? "PASS " : "FAIL ") << chk.name << (chk.detail.empty() ? "" : "  (" + chk.detail + ")")
              << '\n';
  Outputs out{cfg.output_dir, {}};
  out.add("verify.json", rep.to_json());
  out.flush();
  if (!rep.passed()) {
    std::cerr << "failed checks:";
    for (const auto& n : rep.failed_names()) std::cerr << ' ' << n;
    std::cerr << '\n';
    return 1;
  }
  return 0;
}

int cmd_norm(const Common& c, const std::string& field) {
  const RunConfig cfg = load(c);
  const GridPtr grid = build_grid(cfg);
  const SampledField f = field_input(field, grid, cfg.seed);
  const RegionMask whole = RegionMask::whole(grid);
  ojson j;
  j["field"] = field;
  auto arr = ojson::array();
  for (const auto& phi : cfg.young) {
    ojson e;
    e["young"] = phi.label();
    e["luxemburg"] = norm_json(luxemburg_norm(f, phi, whole));
    e["weak"] = norm_json(weak_norm(f, phi, whole));
    arr.push_back(std::move(e));
  }
  j["norms"] = std::move(arr);
  const std::string body = j.dump(2) + "\n";
  std::cout << body;
  Outputs out{cfg.output_dir, {}};
  out.add("norm.json", body);
  out.flush();
  return 0;
}

int cmd_op(const Common& c, const std::string& op_name, std::optional<double> alpha, const std::string& f_spec,
           const std::string& b_spec, const std::string& backend) {
  const RunConfig cfg = load(c);
  const auto op = parse_operator(op_name);
  if (!op) throw InputError("unknown operator '" + op_name + "' (maxal|sharp|maxcomm|comm-max|comm-sharp)");
  if (backend != "fast" && backend != "reference") throw InputError("backend must be fast or reference");
  const double a = alpha.value_or(cfg.alpha);
  const GridPtr grid = build_grid(cfg);
  if (!(a >= 0.0 && a < grid->group().homogeneous_dim())) throw InputError("alpha must lie in [0, Q)");
  const SampledField f = field_input(f_spec, grid, cfg.seed);
  std::optional<SampledField> b;
  if (needs_symbol(*op)) {
    if (b_spec.empty()) throw InputError(op_name + " needs --b");
    b = field_input(b_spec, grid, cfg.seed);
  }
  const BallFamily fam = BallFamily::generate(*grid, cfg.family);
  const SampledField out_field = apply_operator(*op, backend == "fast" ? Backend::fast : Backend::reference,
                                                b ? &*b : nullptr, f, fam, a);
  Outputs out{cfg.output_dir, {}};
  out.add("op-" + op_name + ".csv", field_csv(out_field));
  out.flush();
  std::cout << "wrote " << (cfg.output_dir / ("op-" + op_name + ".csv")).string() << '\n';
  return 0;
}

int cmd_charac(const Common& c, const std::string& b_override) {
  const RunConfig cfg = load(c);
  const GridPtr grid = build_grid(cfg);
  const std::string b_spec = b_override.empty() ? cfg.charac.b : b_override;
  const SampledField b = field_input(b_spec, grid, cfg.seed);
  CharacOptions opt;
  opt.probe_count = cfg.charac.probes;
  opt.operator_ratios = cfg.charac.operator_ratios;
  opt.family = cfg.family;
  opt.operator_family = lean_family(*grid);
  opt.corpus = generate_corpus(cfg.corpus, grid, cfg.seed);
  const YoungFunction& phi = cfg.young.front();
  const auto rep = characterization_report(b, cfg.beta, phi, opt);

  std::ostringstream balls;
  balls << "ball_id";
  for (int k = 0; k < grid->dim(); ++k) balls << ",c" << k;
  balls << ",radius,measure,F1,F2,F3,F4,LipBall\n";
  for (const auto& row : rep.per_ball) {
    balls << row.id;
    for (int k = 0; k < grid->dim(); ++k) balls << ',' << format_double(row.ball.center()[k]);
    const auto& v = row.values;
    balls << ',' << format_double(row.ball.radius()) << ',' << format_double(v.measure) << ',' << format_double(v.f1)
          << ',' << format_double(v.f2) << ',' << format_double(v.f3) << ',' << format_double(v.f4) << ','
          << format_double(v.lip_ball) << '\n';
  }
  std::ostringstream plot;
  plot << "radius,F1,F2,F3,F4,LipBall\n";
  for (const auto& r : rep.per_radius)
    plot << format_double(r.radius) << ',' << format_double(r.f1) << ',' << format_double(r.f2) << ','
         << format_double(r.f3) << ',' << format_double(r.f4) << ',' << format_double(r.lip_ball) << '\n';

  ojson j;
  j["b"] = b_spec;
  j["beta"] = rep.beta;
  j["phi"] = rep.phi_label;
  j["psi"] = rep.psi_label;
  j["grid"] = ojson::parse(grid->descriptor());
  j["sups"] = {{"F1", rep.sup_f1}, {"F2", rep.sup_f2}, {"F3", rep.sup_f3}, {"F4", rep.sup_f4}, {"LipBall", rep.sup_lip}};
  j["scale_stability"] = rep.stability;
  j["scale_stable"] = rep.scale_stable;
  j["negative_part"] = rep.negative_part;
  auto ratios = ojson::array();
  for (const auto& t : rep.ratios) {
    ojson o;
    o["operator"] = std::string(operator_name(t.op));
    o["target"] = t.weak ? "weak" : "strong";
    o["sup_ratio"] = t.sup_ratio;
    auto rows = ojson::array();
    for (const auto& r : t.rows)
      rows.push_back({{"field", r.field_id}, {"target_norm", r.target_norm}, {"source_norm", r.source_norm}, {"ratio", r.ratio}});
    o["rows"] = std::move(rows);
    o["notes"] = t.notes;
    ratios.push_back(std::move(o));
  }
  j["ratios"] = std::move(ratios);
  j["sup_ratio"] = rep.sup_ratio;
  j["verdict_notes"] = rep.verdict_notes;

  for (const auto& n : rep.verdict_notes) std::cout << n << '\n';
  Outputs out{cfg.output_dir, {}};
  out.add("charac_balls.csv", balls.str());
  out.add("charac_summary.json", j.dump(2) + "\n");
  out.add("charac_plot.csv", plot.str());
  out.flush();
  return 0;
}

int cmd_bench(const Common& c, std::size_t oracle_limit) {
  const RunConfig cfg = load(c);
  const BenchReport rep = run_bench(cfg, oracle_limit);
  const std::string csv = rep.to_csv();
  std::cout << csv;
  for (const auto& n : rep.notes) std::cout << "# " << n << '\n';
  Outputs out{cfg.output_dir, {}};
  out.add("bench.csv", csv);
  out.flush();
  if (!rep.ok()) {
    std::cerr << "checksum mismatch:";
    for (const auto& m : rep.mismatches) std::cerr << ' ' << m;
    std::cerr << '\n';
    return 1;
  }
  return 0;
}

int cmd_calibrate(const Common& c, int resolution, std::size_t samples) {
  const RunConfig cfg = load(c);
  CalibrationOptions opts;
  opts.resolution = resolution;
  opts.c0_samples = samples;
  opts.seed = cfg.seed;
  const GroupSpec g = calibrate_constants(cfg.group, opts);
  const auto& cal = *g.calibration();
  ojson j;
  j["group"] = g.name();
  j["c1"] = cal.c1;
  j["c0"] = cal.c0;
  j["resolution"] = cal.resolution;
  j["c0_samples"] = cal.c0_samples;
  const std::string body = j.dump(2) + "\n";
  std::cout << body;
  Outputs out{cfg.output_dir, {}};
  out.add("calibration.json", body);
  out.flush();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete maximal operators, Orlicz norms and Lipschitz characterizations"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--config", c.config, "run configuration (JSON)");
  app.add_option("--out", c.out, "output directory (overrides the config)");
  app.add_option("--seed", c.seed, "seed override");
  app.add_option("--threads", c.threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);
  app.add_option("--grid-scale", c.grid_scale, "grid resolution preset")
      ->check(CLI::IsMember({"small", "default", "large"}));

  auto* verify = app.add_subcommand("verify", "run every property suite");
  auto* norm = app.add_subcommand("norm", "Luxemburg and weak norms of a field");
  std::string norm_field = "indicator";
  norm->add_option("--field", norm_field, "field CSV path or corpus tag");
  auto* op = app.add_subcommand("op", "apply a maximal operator");
  std::string op_name, f_spec = "indicator", b_spec, backend = "fast";
  std::optional<double> alpha;
  op->add_option("--op", op_name, "maxal|sharp|maxcomm|comm-max|comm-sharp")->required();
  op->add_option("--alpha", alpha, "fractional order (default: config alpha)");
  op->add_option("--f", f_spec, "input field CSV path or corpus tag");
  op->add_option("--b", b_spec, "symbol field CSV path or corpus tag");
  op->add_option("--backend", backend, "fast|reference");
  auto* charac = app.add_subcommand("charac", "characterization report for a symbol b");
  std::string b_tag;
  charac->add_option("--b", b_tag, "symbol field CSV path or corpus tag (default: config)");
  auto* bench = app.add_subcommand("bench", "time fast and reference kernels");
  std::size_t oracle_limit = 5000;
  bench->add_option("--oracle-limit", oracle_limit, "largest grid (nodes) on which the reference runs");
  auto* calibrate = app.add_subcommand("calibrate", "estimate c1 and c0 for the configured group");
  int resolution = 0;
  std::size_t samples = 20000;
  calibrate->add_option("--resolution", resolution, "quadrature cells per axis (0: default)");
  calibrate->add_option("--samples", samples, "sampled pairs for c0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (c.threads > 0) omp_set_num_threads(c.threads);
  try {
    if (*verify) return cmd_verify(c);
    if (*norm) return cmd_norm(c, norm_field);
    if (*op) return cmd_op(c, op_name, alpha, f_spec, b_spec, backend);
    if (*charac) return cmd_charac(c, b_tag);
    if (*bench) return cmd_bench(c, oracle_limit);
    if (*calibrate) return cmd_calibrate(c, resolution, samples);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const FieldIoError& e) {
    std::cerr << "field error: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
