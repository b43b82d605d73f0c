#include "maxlab/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "maxlab/corpus.hpp"
#include "maxlab/field_io.hpp"

namespace maxlab {

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

YoungFunction tabulated_from_csv(const std::filesystem::path& path, double lower, double upper) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open Young table '" + path.string() + "'");
  std::vector<double> t, v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double a = 0.0, b = 0.0;
    char comma = 0;
    if (!(ss >> a >> comma >> b) || comma != ',') {
      if (t.empty() && lineno == 1) continue;  // header row
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected 't,value'");
    }
    t.push_back(a);
    v.push_back(b);
  }
  try {
    return YoungFunction::tabulated(std::move(t), std::move(v), lower, upper, path.filename().string());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

YoungFunction young_from(const json& j, const std::filesystem::path& base) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("Young function entry needs a 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "power") return YoungFunction::power(get_or(j, "p", 1.0), get_or(j, "coef", 1.0), get_or<std::string>(j, "label", ""));
    if (kind == "linfty") return YoungFunction::linfinity(get_or(j, "threshold", 1.0), get_or<std::string>(j, "label", ""));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("Young function: ") + e.what());
  }
  if (kind == "tabulated") {
    if (!j.contains("csv") || !j.contains("lower_exponent") || !j.contains("upper_exponent"))
      throw ConfigError("tabulated Young function needs 'csv', 'lower_exponent' and 'upper_exponent'");
    const double upper = j.at("upper_exponent").is_string() ? kInf : j.at("upper_exponent").get<double>();
    return tabulated_from_csv(resolve(base, j.at("csv").get<std::string>()), j.at("lower_exponent").get<double>(), upper);
  }
  throw ConfigError("unknown Young function kind '" + kind + "'");
}

void check_limits(const RunConfig& cfg) {
  const auto d = cfg.points.size();
  if (d == 0 || cfg.lo.size() != d || cfg.hi.size() != d)
    throw ConfigError("grid: lo, hi and points must have the group dimension");
  if (static_cast<int>(d) != cfg.group.coord_dim())
    throw ConfigError("grid dimension " + std::to_string(d) + " does not match group " + cfg.group.name());
  const int cap = max_points_per_axis(static_cast<int>(d));
  for (std::size_t k = 0; k < d; ++k) {
    if (cfg.points[k] < 3) throw ConfigError("grid: at least 3 points per axis");
    if (cfg.points[k] > cap)
      throw ConfigError("grid: " + std::to_string(cfg.points[k]) + " points on axis " + std::to_string(k) +
                        " exceeds the limit " + std::to_string(cap) + " for " + std::to_string(d) + "-D grids");
    if (!(cfg.lo[k] < cfg.hi[k])) throw ConfigError("grid: lo must be below hi on every axis");
  }
}

}  // namespace

int max_points_per_axis(int dim) {
  switch (dim) {
    case 1: return 4097;
    case 2: return 1025;
    default: return 129;
  }
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.young = {YoungFunction::power(1.5, 1.0, "power(1.5)"), YoungFunction::power(2.0, 1.0, "power(2)"),
               YoungFunction::power(3.0, 1.0, "power(3)"), YoungFunction::linfinity(1.0, "linfty")};
  cfg.corpus = {"indicator", "gauge-power(0.5)", "neg-gauge-power(0.5)", "log-gauge", "random-smooth(1)",
                "random-smooth(2)", "step", "constant(1)"};
  return cfg;
}

YoungFunction young_from_json(std::string_view json_text, const std::filesystem::path& base_dir) {
  try {
    return young_from(json::parse(json_text), base_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("Young function JSON: ") + e.what());
  }
}

RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg = default_config();
  try {
    if (j.contains("group")) {
      const auto& g = j.at("group");
      const auto kind = get_or<std::string>(g, "kind", "euclidean");
      if (kind == "euclidean") {
        const int n = get_or(g, "n", 1);
        if (n < 1 || n > 3) throw ConfigError("group: euclidean dimension must be 1, 2 or 3");
        cfg.group = GroupSpec::euclidean(n);
      } else if (kind == "heisenberg1") {
        cfg.group = GroupSpec::heisenberg1();
      } else {
        throw ConfigError("group: unknown kind '" + kind + "'");
      }
      if (g.contains("c1") || g.contains("c0")) {
        if (!g.contains("c1") || !g.contains("c0")) throw ConfigError("group: give both c1 and c0");
        GroupCalibration cal;
        cal.c1 = g.at("c1").get<double>();
        cal.c0 = g.at("c0").get<double>();
        cal.resolution = get_or(g, "calibration_resolution", 0);
        cfg.group = cfg.group.with_calibration(cal);
      }
      const int d = cfg.group.coord_dim();
      cfg.lo.assign(static_cast<std::size_t>(d), -1.0);
      cfg.hi.assign(static_cast<std::size_t>(d), 1.0);
      cfg.points.assign(static_cast<std::size_t>(d), d == 1 ? 1025 : (d == 2 ? 65 : 17));
    }
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      cfg.lo = get_or(g, "lo", cfg.lo);
      cfg.hi = get_or(g, "hi", cfg.hi);
      cfg.points = get_or(g, "points", cfg.points);
    }
    if (j.contains("young")) {
      cfg.young.clear();
      for (const auto& y : j.at("young")) cfg.young.push_back(young_from(y, base_dir));
      if (cfg.young.empty()) throw ConfigError("young: list must not be empty");
    }
    if (j.contains("family")) {
      const auto& f = j.at("family");
      cfg.family.center_stride = get_or(f, "center_stride", cfg.family.center_stride);
      cfg.family.r_min = get_or(f, "r_min", cfg.family.r_min);
      cfg.family.ratio = get_or(f, "ratio", cfg.family.ratio);
      cfg.family.count = get_or(f, "count", cfg.family.count);
      cfg.family.cover = get_or(f, "cover", cfg.family.cover);
      if (cfg.family.center_stride < 1 || !(cfg.family.ratio > 1.0) || cfg.family.count < 0 || cfg.family.r_min < 0.0)
        throw ConfigError("family: need center_stride >= 1, ratio > 1, count >= 0, r_min >= 0");
    }
    cfg.corpus = get_or(j, "corpus", cfg.corpus);
    for (const auto& tag : cfg.corpus) {
      try {
        parse_corpus_tag(tag);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("corpus: ") + e.what());
      }
    }
    cfg.beta = get_or(j, "beta", cfg.beta);
    cfg.alpha = get_or(j, "alpha", cfg.alpha);
    cfg.seed = get_or(j, "seed", cfg.seed);
    cfg.pairs = get_or(j, "pairs", cfg.pairs);
    cfg.output_dir = get_or<std::string>(j, "output_dir", cfg.output_dir.string());
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      cfg.tol.identity = get_or(t, "identity", cfg.tol.identity);
      cfg.tol.pointwise = get_or(t, "pointwise", cfg.tol.pointwise);
      cfg.tol.holder = get_or(t, "holder", cfg.tol.holder);
      cfg.tol.norm = get_or(t, "norm", cfg.tol.norm);
    }
    if (j.contains("fields"))
      for (const auto& [name, path] : j.at("fields").items()) cfg.fields[name] = resolve(base_dir, path.get<std::string>());
    if (j.contains("almost_decreasing")) {
      const auto& a = j.at("almost_decreasing");
      if (a.contains("psi")) cfg.almost_decreasing.psi = young_from(a.at("psi"), base_dir);
      cfg.almost_decreasing.eps = get_or(a, "eps", cfg.almost_decreasing.eps);
      cfg.almost_decreasing.k_threshold = get_or(a, "k_threshold", cfg.almost_decreasing.k_threshold);
    }
    if (j.contains("charac")) {
      const auto& c = j.at("charac");
      cfg.charac.b = get_or(c, "b", cfg.charac.b);
      cfg.charac.probes = get_or(c, "probes", cfg.charac.probes);
      cfg.charac.operator_ratios = get_or(c, "operator_ratios", cfg.charac.operator_ratios);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw ConfigError("beta must lie in (0, 1)");
  if (!(cfg.alpha >= 0.0 && cfg.alpha < cfg.group.homogeneous_dim())) throw ConfigError("alpha must lie in [0, Q)");
  if (cfg.pairs < 1) throw ConfigError("pairs must be positive");
  check_limits(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

void apply_grid_scale(RunConfig& cfg, std::string_view scale) {
  if (scale == "default") return;
  for (auto& n : cfg.points) {
    if (scale == "small")
      n = std::max(3, (n - 1) / 2 + 1);
    else if (scale == "large")
      n = (n - 1) * 2 + 1;
    else
      throw ConfigError("grid scale must be small, default or large");
  }
  check_limits(cfg);
}

GridPtr build_grid(const RunConfig& cfg) {
  GroupSpec group = cfg.group.calibrated() ? cfg.group : calibrate_constants(cfg.group);
  return make_grid(std::move(group), cfg.lo, cfg.hi, cfg.points);
}

std::optional<SampledField> load_named_field(const RunConfig& cfg, const std::string& name, const GridPtr& grid) {
  const auto it = cfg.fields.find(name);
  if (it == cfg.fields.end()) return std::nullopt;
  return read_field_csv(it->second, grid);
}

}  // namespace maxlab
