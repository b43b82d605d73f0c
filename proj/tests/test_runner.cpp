#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>

#include "maxlab/bench.hpp"
#include "maxlab/config.hpp"
#include "maxlab/corpus.hpp"
#include "maxlab/field_io.hpp"
#include "maxlab/verify.hpp"

using namespace maxlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("maxlab-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream os(p, std::ios::binary);
  os << s;
}

std::string read_text(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct RunResult {
  int code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + MAXLAB_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.output = read_text(log);
  return r;
}

const char* kSmall = R"json({
  "group": {"kind": "euclidean", "n": 1},
  "grid": {"lo": [-1], "hi": [1], "points": [257]},
  "young": [{"kind": "power", "p": 1.5}, {"kind": "power", "p": 2}],
  "family": {"center_stride": 8, "ratio": 1.5, "cover": true},
  "corpus": ["indicator", "gauge-power(0.5)", "random-smooth(3)", "step"],
  "beta": 0.5, "seed": 9, "pairs": 3
})json";

}  // namespace

TEST_SUITE("runner") {

TEST_CASE("config parsing") {
  const auto cfg = parse_config(kSmall);
  CHECK(cfg.points == std::vector<int>{257});
  CHECK(cfg.young.size() == 2);
  CHECK(cfg.family.center_stride == 8);
  CHECK(cfg.family.ratio == 1.5);
  CHECK(cfg.seed == 9);
  CHECK(cfg.pairs == 3);
  CHECK(cfg.corpus.size() == 4);
  CHECK(cfg.tol.pointwise == 1e-9);

  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"group": {"kind": "spherical"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"lo": [-1], "hi": [1], "points": [4098]}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"group": {"kind": "heisenberg1"}, "grid": {"lo": [-1,-1,-1], "hi": [1,1,1], "points": [130,9,9]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"lo": [1], "hi": [-1], "points": [9]}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"beta": 1.5})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"corpus": ["no-such-field"]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"young": [{"kind": "power", "p": 0.5}]})"), ConfigError);
  CHECK(max_points_per_axis(1) == 4097);
  CHECK(max_points_per_axis(3) == 129);
}

TEST_CASE("grid scale") {
  auto cfg = parse_config(kSmall);
  apply_grid_scale(cfg, "small");
  CHECK(cfg.points == std::vector<int>{129});
  cfg = parse_config(kSmall);
  apply_grid_scale(cfg, "large");
  CHECK(cfg.points == std::vector<int>{513});
  cfg = parse_config(R"({"grid": {"lo": [-1], "hi": [1], "points": [4097]}})");
  CHECK_THROWS_AS(apply_grid_scale(cfg, "large"), ConfigError);
  CHECK_THROWS_AS(apply_grid_scale(cfg, "huge"), ConfigError);
}

TEST_CASE("corpus tags") {
  const auto g = build_grid(parse_config(kSmall));
  for (const char* tag : {"indicator", "gauge-power(0.5)", "neg-gauge-power(0.5)", "log-gauge", "random-smooth(4)", "step",
                          "constant(2)"}) {
    const auto t = parse_corpus_tag(tag);
    CHECK(t.text() == tag);
    const auto a = generate_field(t, g, 1), b = generate_field(t, g, 1);
    CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    for (double v : a.values()) CHECK(std::isfinite(v));
  }
  const auto r1 = generate_field("random-smooth(4)", g, 1), r2 = generate_field("random-smooth(4)", g, 2);
  CHECK_FALSE(std::equal(r1.values().begin(), r1.values().end(), r2.values().begin()));
  CHECK_THROWS_AS(parse_corpus_tag("gauge-power"), std::invalid_argument);
  CHECK_THROWS_AS(parse_corpus_tag("step(2"), std::invalid_argument);
}

TEST_CASE("verify on a small config") {
  const fs::path dir = scratch("verify");
  write_text(dir / "cfg.json", kSmall);
  const auto r = run_cli("verify --config \"" + (dir / "cfg.json").string() + "\" --out \"" + (dir / "out").string() + "\"",
                         dir / "log.txt");
  INFO(r.output);
  CHECK(r.code == 0);
  const auto report = nlohmann::json::parse(read_text(dir / "out" / "verify.json"));
  CHECK(report["passed"] == true);
  CHECK(report["checks"].size() >= 15);
  for (const auto& chk : report["checks"]) {
    CHECK(chk.contains("anchor"));
    CHECK(chk.contains("slack"));
  }
}

TEST_CASE("default verify finishes within a minute") {
  const fs::path dir = scratch("verify-default");
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_cli("verify --out \"" + (dir / "out").string() + "\"", dir / "log.txt");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  INFO(r.output);
  CHECK(r.code == 0);
  CHECK(secs < 60.0);
}

TEST_CASE("corrupted field file exits 2 and writes nothing") {
  const fs::path dir = scratch("corrupt");
  const auto g = build_grid(parse_config(kSmall));
  std::ostringstream os;
  write_field_csv(os, generate_field("step", g, 1));
  std::string text = os.str();
  // Break the value on file line 9.
  std::size_t pos = 0;
  for (int k = 0; k < 8; ++k) pos = text.find('\n', pos) + 1;
  const std::size_t comma = text.find(',', pos);
  text.replace(comma + 1, text.find('\n', pos) - comma - 1, "abc");
  write_text(dir / "b.csv", text);
  std::string cfg = kSmall;
  cfg.insert(cfg.rfind('}'), R"(, "fields": {"b": "b.csv"})");
  write_text(dir / "cfg.json", cfg);
  const auto r = run_cli("verify --config \"" + (dir / "cfg.json").string() + "\" --out \"" + (dir / "out").string() + "\"",
                         dir / "log.txt");
  INFO(r.output);
  CHECK(r.code == 2);
  CHECK(r.output.find("b.csv") != std::string::npos);
  CHECK(r.output.find("b.csv:9") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out"));

  const auto bad = run_cli("op --op nope --out \"" + (dir / "out2").string() + "\"", dir / "log2.txt");
  CHECK(bad.code == 2);
  CHECK_FALSE(fs::exists(dir / "out2"));
}

TEST_CASE("negative control exits 1 naming the check") {
  const fs::path dir = scratch("negative");
  std::string cfg = kSmall;
  cfg.insert(cfg.rfind('}'), R"(, "almost_decreasing": {"psi": {"kind": "power", "p": 1}, "eps": 0.5})");
  write_text(dir / "cfg.json", cfg);
  const auto r = run_cli("verify --config \"" + (dir / "cfg.json").string() + "\" --out \"" + (dir / "out").string() + "\"",
                         dir / "log.txt");
  INFO(r.output);
  CHECK(r.code == 1);
  CHECK(r.output.find("FAIL almost-decreasing") != std::string::npos);
  const auto report = nlohmann::json::parse(read_text(dir / "out" / "verify.json"));
  CHECK(report["passed"] == false);
}

TEST_CASE("outputs are byte-identical across runs") {
  const fs::path dir = scratch("determinism");
  write_text(dir / "cfg.json", kSmall);
  const std::string base = "--config \"" + (dir / "cfg.json").string() + "\" --out ";
  for (const char* sub : {"a", "b"}) {
    const std::string out = "\"" + (dir / sub).string() + "\"";
    REQUIRE(run_cli("verify " + base + out, dir / "log.txt").code == 0);
    REQUIRE(run_cli("charac --b 'neg-gauge-power(0.5)' " + base + out, dir / "log.txt").code == 0);
    REQUIRE(run_cli("op --op comm-sharp --f 'random-smooth(2)' --b step " + base + out, dir / "log.txt").code == 0);
    REQUIRE(run_cli("norm --field 'gauge-power(0.5)' " + base + out, dir / "log.txt").code == 0);
  }
  for (const char* f : {"verify.json", "charac_balls.csv", "charac_summary.json", "charac_plot.csv", "op-comm-sharp.csv",
                        "norm.json"}) {
    INFO(f);
    CHECK(read_text(dir / "a" / f) == read_text(dir / "b" / f));
    CHECK_FALSE(read_text(dir / "a" / f).empty());
  }
  const auto summary = nlohmann::json::parse(read_text(dir / "a" / "charac_summary.json"));
  bool negative = false;
  for (const auto& n : summary["verdict_notes"]) negative |= n.get<std::string>().find("negative part detected") != std::string::npos;
  CHECK(negative);
}

TEST_CASE("charac on a constant symbol") {
  const fs::path dir = scratch("charac-const");
  write_text(dir / "cfg.json", kSmall);
  const auto r = run_cli("charac --b 'constant(1)' --config \"" + (dir / "cfg.json").string() + "\" --out \"" +
                             (dir / "out").string() + "\"",
                         dir / "log.txt");
  INFO(r.output);
  REQUIRE(r.code == 0);
  const auto s = nlohmann::json::parse(read_text(dir / "out" / "charac_summary.json"));
  CHECK(s["sups"]["F1"].get<double>() <= 1e-6);
  CHECK(s["sups"]["F2"].get<double>() <= 1e-6);
  CHECK(s["sups"]["LipBall"].get<double>() <= 1e-6);
  // 2 M#(chi_B) = 1 holds only up to the family's doubling resolution.
  CHECK(s["sups"]["F3"].get<double>() <= 0.05);
  CHECK(s["sups"]["F4"].get<double>() <= 0.05);
}

TEST_CASE("bench checksums agree and repeat") {
  auto cfg = parse_config(R"({"group": {"kind": "euclidean", "n": 2}, "grid": {"lo": [-1,-1], "hi": [1,1], "points": [17,17]},
                              "family": {"center_stride": 2, "ratio": 1.5, "cover": true}})");
  const auto a = run_bench(cfg), b = run_bench(cfg);
  CHECK(a.ok());
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].checksum == b.rows[i].checksum);
  std::size_t refs = 0;
  for (const auto& r : a.rows) refs += r.backend == "reference";
  CHECK(refs == 5);
  const auto guarded = run_bench(cfg, 100);
  for (const auto& r : guarded.rows) CHECK(r.backend == "fast");
  CHECK_FALSE(guarded.notes.empty());
}

}  // TEST_SUITE
