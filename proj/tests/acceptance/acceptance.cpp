// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "maxlab/config.hpp"
#include "maxlab/corpus.hpp"
#include "maxlab/lipschitz.hpp"
#include "maxlab/maximal.hpp"
#include "maxlab/orlicz.hpp"
#include "maxlab/rng.hpp"
#include "maxlab/verify.hpp"

using namespace maxlab;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds; 0 means none
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const GroupSpec& heisenberg() {
  static const GroupSpec h = calibrate_constants(GroupSpec::heisenberg1());
  return h;
}

GridPtr line(int n) {
  static const GroupSpec e1 = calibrate_constants(GroupSpec::euclidean(1));
  return make_grid(e1, {-1.0}, {1.0}, {n});
}
GridPtr square(int n) { return make_grid(GroupSpec::euclidean(2), {-1, -1}, {1, 1}, {n, n}); }
GridPtr heis(int n) { return make_grid(heisenberg(), {-1, -1, -1}, {1, 1, 1}, {n, n, n}); }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

SampledField noise(const GridPtr& g, std::uint64_t seed) {
  CounterRng rng(seed, "acceptance");
  std::vector<double> v(g->node_count());
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return SampledField(g, v);
}

Outcome indicator_norms() {
  const auto g = line(4097);
  double worst_inv = 0.0, worst_pow = 0.0;
  for (double r : {0.01, 0.1, 0.5}) {
    const auto m = mask_from_ball(Ball({0.0}, r), g);
    const auto chi = indicator(m);
    for (double p : {1.0, 2.0, 3.0}) {
      const auto phi = YoungFunction::power(p);
      for (double v : {luxemburg_norm(chi, phi, RegionMask::whole(g)).value, weak_norm(chi, phi, RegionMask::whole(g)).value}) {
        worst_inv = std::max(worst_inv, rel(v, 1.0 / phi.inverse(1.0 / m.measure())));
        worst_pow = std::max(worst_pow, rel(v, std::pow(m.measure(), 1.0 / p)));
      }
    }
  }
  return {worst_inv <= 1e-6 && worst_pow <= 1e-9,
          "max rel err vs 1/Phi^-1(1/|B|) " + fmt("%.2e", worst_inv) + ", vs |B|^(1/p) " + fmt("%.2e", worst_pow)};
}

Outcome conjugate_pairs() {
  const auto grid = log_grid(1e-6, 1e6, 100);
  double lo = kInf, hi = 0.0;
  bool ok = true;
  for (double p : {1.0, 1.5, 2.0, 4.0}) {
    const auto rep = check_young_pair(YoungFunction::power(p), grid, ConjugateMode::numeric);
    ok = ok && rep.ok && rep.min_ratio >= 1.0 - 1e-6 && rep.max_ratio <= 2.0 + 1e-6;
    lo = std::min(lo, rep.min_ratio);
    hi = std::max(hi, rep.max_ratio);
  }
  return {ok, "ratios in [" + fmt("%.9f", lo) + ", " + fmt("%.9f", hi) + "]"};
}

Outcome maximal_identities() {
  struct Case {
    GridPtr grid;
    Ball ball;
    std::vector<double> alphas;
  };
  const std::vector<Case> cases{{square(65), Ball({0.0, 0.0}, 0.4), {0.0, 1.0}},
                                {heis(33), Ball({0.0, 0.0, 0.0}, 0.6), {0.0, 2.0}}};
  double worst = 0.0;
  std::size_t nodes = 0;
  for (const auto& c : cases) {
    const auto fam = BallFamily::generate(*c.grid, {.center_stride = 4, .r_min = 0.0, .ratio = std::sqrt(2.0), .count = 0, .cover = true}, {c.ball});
    const auto m = mask_from_ball(c.ball, c.grid);
    const double q = c.grid->group().homogeneous_dim();
    for (double a : c.alphas) {
      const auto out = fractional_maximal(indicator(m), fam, a);
      const double expected = std::pow(m.measure(), a / q);
      for (std::size_t i = 0; i < out.size(); ++i)
        if (m.contains(i)) {
          worst = std::max(worst, rel(out[i], expected));
          ++nodes;
        }
    }
  }
  return {worst <= 1e-12 && nodes > 0, fmt("%.0f", static_cast<double>(nodes)) + " ball nodes, max rel err " + fmt("%.2e", worst)};
}

Outcome sharp_half() {
  const auto g = square(65);
  const Ball b({0.0, 0.0}, 0.25);
  const auto fam = BallFamily::generate(*g, {.center_stride = 1, .r_min = 0.25, .ratio = std::pow(2.0, 0.25), .count = 4, .cover = true}, {b});
  const auto m = mask_from_ball(b, g);
  const auto s = sharp_maximal(indicator(m), fam);
  double lo = kInf, hi = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (m.contains(i)) {
      lo = std::min(lo, s[i]);
      hi = std::max(hi, s[i]);
    }
  double cmax = 0.0;
  const auto sc = sharp_maximal(SampledField::constant(g, 0.7), fam);
  for (double v : sc.values()) cmax = std::max(cmax, std::abs(v));
  return {lo >= 0.45 && hi <= 0.5 && cmax == 0.0,
          "M#(chi_B) on B in [" + fmt("%.6f", lo) + ", " + fmt("%.6f", hi) + "], constant max " + fmt("%.1e", cmax)};
}

Outcome pointwise() {
  struct Case {
    GridPtr grid;
    int pairs;
  };
  const std::vector<Case> cases{{line(1025), 20}, {heis(17), 5}};
  std::size_t violations = 0, pairs = 0;
  double worst = kInf;
  for (const auto& c : cases) {
    const Ball b0 = indicator_ball(*c.grid);
    const auto fam = BallFamily::generate(*c.grid, lean_family(*c.grid), {b0});
    for (int k = 0; k < c.pairs; ++k) {
      auto b = generate_field(CorpusTag{"random-smooth", 1000.0 + 2 * k}, c.grid, 17);
      if (k % 4 == 1) b = generate_field(CorpusTag{"neg-gauge-power", 0.5}, c.grid, 17) + scale(b, 0.25);
      if (k % 4 == 2) b = generate_field(CorpusTag{"gauge-power", 0.5}, c.grid, 17);
      const auto f = k % 2 ? noise(c.grid, static_cast<std::uint64_t>(k)) : generate_field(CorpusTag{"random-smooth", 1001.0 + 2 * k}, c.grid, 17);
      const auto s = pointwise_suite(b, f, b0, fam, 0.5, 1e-9);
      violations += s.total_violations();
      for (const auto* t : {&s.nonneg_commutator, &s.signed_commutator, &s.mean_oscillation, &s.lipschitz_domination})
        worst = std::min(worst, t->worst);
      ++pairs;
    }
  }
  return {violations == 0, fmt("%.0f", static_cast<double>(pairs)) + " pairs, " + fmt("%.0f", static_cast<double>(violations)) +
                               " violations, min slack " + fmt("%.3e", worst)};
}

Outcome oracle() {
  struct Case {
    GridPtr grid;
    FamilyParams params;
  };
  const std::vector<Case> cases{{line(65), {.center_stride = 2, .r_min = 0.0, .ratio = 1.5, .count = 0, .cover = true}},
                                {square(17), {.center_stride = 2, .r_min = 0.0, .ratio = 1.5, .count = 0, .cover = true}},
                                {heis(9), {.center_stride = 2, .r_min = 0.0, .ratio = 1.5, .count = 0, .cover = true}}};
  std::size_t diff = 0, compared = 0;
  for (const auto& c : cases) {
    const auto fam = BallFamily::generate(*c.grid, c.params);
    const auto b = noise(c.grid, 1), f = noise(c.grid, 2);
    for (auto op : {OperatorKind::maximal, OperatorKind::sharp, OperatorKind::maximal_commutator, OperatorKind::commutator_maximal,
                    OperatorKind::commutator_sharp})
      for (double a : {0.0, 0.5}) {
        const auto x = apply_operator(op, Backend::fast, &b, f, fam, a);
        const auto y = apply_operator(op, Backend::reference, &b, f, fam, a);
        for (std::size_t i = 0; i < x.size(); ++i) diff += x[i] == y[i] ? 0 : 1;
        compared += x.size();
      }
  }
  return {diff == 0, fmt("%.0f", static_cast<double>(compared)) + " values compared, " + fmt("%.0f", static_cast<double>(diff)) + " differ"};
}

Outcome contrast() {
  const auto g = line(2049);
  const double h = g->spacing(0);
  const auto phi = YoungFunction::power(1.5);
  CharacOptions opts;
  opts.operator_ratios = false;
  opts.family = {.center_stride = 4, .r_min = 0.0, .ratio = std::sqrt(2.0), .count = 0, .cover = true};
  for (double k = 8; k <= 128; k *= 2) opts.radii.push_back(k * h);
  const auto pos = characterization_report(generate_field("gauge-power(0.5)", g, 1), 0.5, phi, opts);
  const auto neg = characterization_report(generate_field("neg-gauge-power(0.5)", g, 1), 0.5, phi, opts);

  CharacOptions step_opts = opts;
  step_opts.radii.clear();
  for (double k = 4; k <= 512; k *= 2) step_opts.radii.push_back(k * h);
  step_opts.centers = {GroupPoint{0.0}, GroupPoint{-h}, GroupPoint{h}};
  const auto step = characterization_report(generate_field("step", g, 1), 0.5, phi, step_opts);
  const double small = step.per_radius.front().f2, large = step.per_radius.back().f2;

  const bool ok = pos.stability <= 4.0 && large > 0.0 && small >= 10.0 * large && neg.negative_part && !pos.negative_part;
  return {ok, "rho^beta F2 spread " + fmt("%.3f", pos.stability) + ", step small/large F2 " + fmt("%.2f", small / large) +
                  ", sign -rho^beta " + (neg.negative_part ? "negative" : "nonnegative") + ", rho^beta " +
                  (pos.negative_part ? "negative" : "nonnegative")};
}

Outcome exponents() {
  const double beta = 0.5;
  double worst = 0.0;
  std::string rejected;
  bool ok = true;
  for (double p : {1.5, 2.0})
    for (double q : {1.0, 4.0}) {
      const double inv = 1.0 / p - beta / q;
      if (inv <= 0.0) {
        // q = infinity: the prescription is not strictly increasing and must be rejected.
        try {
          psi_from_phi(YoungFunction::power(p), beta, q);
          ok = false;
        } catch (const PsiConstructionError&) {
          rejected += " (p=" + fmt("%g", p) + ",Q=" + fmt("%g", q) + ")";
        }
        continue;
      }
      const auto psi = psi_from_phi(YoungFunction::power(p), beta, q);
      worst = std::max(worst, std::abs(tabulated_loglog_slope(psi, 1e-6, 1e6) - 1.0 / inv));
    }
  return {ok && worst <= 1e-3, "max slope err " + fmt("%.2e", worst) + ", rejected at q=inf:" + rejected};
}

std::vector<GridPtr> instances() { return {line(1025), square(65), heis(17)}; }

Outcome weak_strong() {
  const auto cfg = default_config();
  double worst = kInf;
  std::size_t n = 0;
  for (const auto& g : instances())
    for (const auto& nf : generate_corpus(cfg.corpus, g, cfg.seed))
      for (const auto& phi : cfg.young) {
        const double w = weak_norm(nf.field, phi, RegionMask::whole(g)).value;
        const double s = luxemburg_norm(nf.field, phi, RegionMask::whole(g)).value;
        worst = std::min(worst, s == 0.0 ? (w == 0.0 ? 0.0 : -kInf) : (s - w) / s);
        ++n;
      }
  return {worst >= -1e-9, fmt("%.0f", static_cast<double>(n)) + " (field, Phi) cases, min relative slack " + fmt("%.3e", worst)};
}

Outcome holder() {
  double worst = kInf;
  std::size_t n = 0;
  for (const auto& g : instances())
    for (double p : {1.5, 2.0, 3.0})
      for (int k = 0; k < 20; ++k) {
        const auto f = generate_field(CorpusTag{"random-smooth", 2.0 * k}, g, 23);
        const auto h = generate_field(CorpusTag{"random-smooth", 2.0 * k + 1}, g, 23);
        const auto c = holder_check(f, h, YoungFunction::power(p), RegionMask::whole(g));
        worst = std::min(worst, c.slack());
        ++n;
      }
  return {worst >= -1e-6, fmt("%.0f", static_cast<double>(n)) + " pairs, min relative slack " + fmt("%.3e", worst)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "indicator-norm law", 10.0, indicator_norms},
      {2, "conjugate-pair bounds", 5.0, conjugate_pairs},
      {3, "maximal identities", 300.0, maximal_identities},
      {4, "sharp-maximal half identity", 0.0, sharp_half},
      {5, "pointwise inequality suite", 120.0, pointwise},
      {6, "oracle equivalence", 60.0, oracle},
      {7, "characterization contrast", 120.0, contrast},
      {8, "exponent arithmetic", 0.0, exponents},
      {9, "weak below strong", 0.0, weak_strong},
      {10, "holder suite", 0.0, holder},
  };
  heisenberg();
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.time_limit <= 0.0 || secs < c.time_limit;
    const bool ok = o.passed && in_time;
    failures += ok ? 0 : 1;
    std::printf("%s %2d %s: %s; %.2f s%s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(), secs,
                in_time ? "" : fmt(" (limit %.0f s)", c.time_limit).c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
