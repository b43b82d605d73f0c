#include "maxlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>

#include "maxlab/corpus.hpp"
#include "maxlab/lipschitz.hpp"
#include "maxlab/maximal.hpp"
#include "maxlab/orlicz.hpp"
#include "maxlab/reference.hpp"
#include "maxlab/rng.hpp"

namespace maxlab {

void InequalityTally::add(double lhs, double rhs, double tol) {
  const double m = rhs - lhs;
  worst = std::min(worst, m);
  if (m < -tol) ++violations;
}

std::size_t PointwiseSuite::total_violations() const {
  return nonneg_commutator.violations + signed_commutator.violations + mean_oscillation.violations +
         lipschitz_domination.violations;
}

FamilyParams lean_family(const GridSpec& grid) {
  const int per_axis = grid.dim() == 1 ? 32 : (grid.dim() == 2 ? 8 : 2);
  int n = grid.points()[0];
  for (int p : grid.points()) n = std::min(n, p);
  return FamilyParams{.center_stride = std::max(1, (n - 1) / per_axis), .r_min = 0.0, .ratio = 2.0, .count = 0,
                      .cover = true};
}

PointwiseSuite pointwise_suite(const SampledField& b, const SampledField& f, const Ball& b0, const BallFamily& family,
                               double beta, double tol) {
  PointwiseSuite s;
  const SampledField bp = abs(b);
  const SampledField mf = fractional_maximal(f, family, 0.0);
  const SampledField mbf = maximal_commutator(b, f, family, 0.0);
  const SampledField mbpf = maximal_commutator(bp, f, family, 0.0);
  const SampledField comm_p = bp * mf - fractional_maximal(bp * f, family, 0.0);
  const SampledField comm = b * mf - fractional_maximal(b * f, family, 0.0);
  const SampledField neg = negative_part(b);
  for (std::size_t i = 0; i < b.size(); ++i) {
    s.nonneg_commutator.add(std::abs(comm_p[i]), mbpf[i], tol);
    s.signed_commutator.add(std::abs(comm[i]), mbf[i] + 2.0 * neg[i] * mf[i], tol);
  }
  const RegionMask m0 = mask_from_ball(b0, b.grid_ptr());
  if (!m0.empty()) {
    const double mean = average_over(b, m0);
    const SampledField mb_chi = maximal_commutator(b, indicator(m0), family, 0.0);
    for (std::size_t i = 0; i < b.size(); ++i)
      if (m0.contains(i)) s.mean_oscillation.add(std::abs(b[i] - mean), mb_chi[i], tol);
  }
  s.lipschitz_constant = pointwise_lipschitz_constant(b, beta, family);
  const SampledField mbeta = fractional_maximal(f, family, beta);
  for (std::size_t i = 0; i < b.size(); ++i) s.lipschitz_domination.add(mbf[i], s.lipschitz_constant * mbeta[i], tol);
  return s;
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<std::string> VerifyReport::failed_names() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.passed) out.push_back(c.name);
  return out;
}

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json j;
  j["passed"] = passed();
  j["seed"] = seed;
  j["grid"] = nlohmann::ordered_json::parse(grid);
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json o;
    o["name"] = c.name;
    o["anchor"] = c.anchor;
    o["passed"] = c.passed;
    o["slack"] = std::isfinite(c.slack) ? nlohmann::ordered_json(c.slack) : nlohmann::ordered_json(nullptr);
    o["detail"] = c.detail;
    arr.push_back(std::move(o));
  }
  j["checks"] = std::move(arr);
  return j.dump(2) + "\n";
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

struct Suite {
  VerifyReport& rep;
  void add(std::string name, std::string anchor, double slack, bool ok, std::string detail = {}) {
    rep.checks.push_back({std::move(name), std::move(anchor), ok, slack, std::move(detail)});
  }
};

void group_checks(Suite& s, const GridSpec& grid, std::uint64_t seed) {
  const GroupSpec& g = grid.group();
  CounterRng rng(seed, "verify-group");
  const int d = g.coord_dim();
  auto draw = [&] {
    std::vector<double> c(static_cast<std::size_t>(d));
    for (auto& v : c) v = rng.uniform(-2.0, 2.0);
    return GroupPoint(c);
  };
  double axiom_err = 0.0, homog_err = 0.0, sym_err = 0.0, tri_margin = kInf;
  for (int k = 0; k < 200; ++k) {
    const GroupPoint a = draw(), b = draw(), c = draw();
    const GroupPoint l = group_mul(group_mul(a, b, g), c, g), r = group_mul(a, group_mul(b, c, g), g);
    const GroupPoint e = group_mul(a, group_inv(a, g), g);
    for (int i = 0; i < d; ++i) axiom_err = std::max({axiom_err, std::abs(l[i] - r[i]), std::abs(e[i])});
    for (double sc : {0.5, 2.0, 10.0}) {
      const double ra = hom_norm(a, g);
      homog_err = std::max(homog_err, std::abs(hom_norm(dilate(a, sc, g), g) - sc * ra) / (sc * ra));
    }
    sym_err = std::max(sym_err, std::abs(hom_norm(group_inv(a, g), g) - hom_norm(a, g)));
    tri_margin = std::min(tri_margin, g.c0() * (hom_norm(a, g) + hom_norm(b, g)) - hom_norm(group_mul(a, b, g), g));
  }
  s.add("group-axioms", "group law is associative with inverse -g", -axiom_err, axiom_err <= 1e-12);
  s.add("gauge-homogeneity", "rho(delta_s g) = s rho(g)", -homog_err, homog_err <= 1e-12);
  s.add("gauge-symmetry", "rho(g^-1) = rho(g)", -sym_err, sym_err == 0.0);
  s.add("quasi-triangle", "rho(gh) <= c0 (rho(g) + rho(h))", tri_margin, tri_margin >= -1e-12,
        "c0 = " + fmt(g.c0()));
}

void young_checks(Suite& s, const RunConfig& cfg) {
  const auto rgrid = log_grid(1e-6, 1e6, 100);
  for (const auto& phi : cfg.young) {
    const std::string lbl = phi.label().empty() ? "phi" : phi.label();
    if (phi.in_class_y()) {
      double err = 0.0;
      for (double r : log_grid(1e-3, 1e3, 61)) err = std::max(err, rel_err(phi.inverse(phi(r)), r));
      s.add("young-inverse(" + lbl + ")", "Phi^{-1}(Phi(r)) = r for finite positive Phi", -err, err <= 1e-10);
    }
    const auto pair = check_young_pair(phi, rgrid, ConjugateMode::numeric);
    s.add("young-pair(" + lbl + ")", "r <= Phi^{-1}(r) conj^{-1}(r) <= 2r", std::min(pair.min_ratio - 1.0, 2.0 - pair.max_ratio),
          pair.ok, "ratios in [" + fmt(pair.min_ratio) + ", " + fmt(pair.max_ratio) + "]");
  }
}

void norm_checks(Suite& s, const RunConfig& cfg, const GridPtr& grid, const std::vector<NamedField>& corpus) {
  const Ball ib = indicator_ball(*grid);
  for (const auto& phi : cfg.young) {
    const std::string lbl = phi.label().empty() ? "phi" : phi.label();
    double worst = 0.0;
    for (double frac : {0.5, 1.0, 1.5}) {
      const RegionMask m = mask_from_ball(Ball(ib.center(), ib.radius() * frac), grid);
      if (m.empty()) continue;
      const SampledField chi = indicator(m);
      const RegionMask whole = RegionMask::whole(grid);
      const double want = 1.0 / phi.inverse(1.0 / m.measure());
      worst = std::max({worst, rel_err(luxemburg_norm(chi, phi, whole).value, want),
                        rel_err(weak_norm(chi, phi, whole).value, want)});
    }
    s.add("indicator-norm(" + lbl + ")", "||chi_D|| = 1/Phi^{-1}(1/|D|) for strong and weak norms", -worst,
          worst <= 1e-6);
    double margin = kInf;
    std::string where;
    for (const auto& item : corpus) {
      const RegionMask whole = RegionMask::whole(grid);
      const double strong = luxemburg_norm(item.field, phi, whole).value;
      const double weak = weak_norm(item.field, phi, whole).value;
      const double m = strong * (1.0 + cfg.tol.norm) - weak;
      if (m < margin) {
        margin = m;
        where = item.id;
      }
    }
    s.add("weak-le-strong(" + lbl + ")", "weak Orlicz norm <= Luxemburg norm", margin, margin >= 0.0,
          "tightest field " + where);
    double hmargin = kInf;
    int hfail = 0;
    for (int k = 0; k < cfg.pairs; ++k) {
      const auto f = generate_field(CorpusTag{"random-smooth", 2.0 * k}, grid, cfg.seed);
      const auto g = generate_field(CorpusTag{"random-smooth", 2.0 * k + 1}, grid, cfg.seed);
      const auto h = holder_check(f, g, phi, RegionMask::whole(grid));
      hmargin = std::min(hmargin, h.slack());
      hfail += h.ok ? 0 : 1;
    }
    s.add("holder(" + lbl + ")", "int |fg| <= 2 ||f||_Phi ||g||_conj", hmargin, hfail == 0,
          std::to_string(cfg.pairs) + " seeded pairs");
  }
}

void maximal_checks(Suite& s, const RunConfig& cfg, const GridPtr& grid) {
  const GridSpec& g = *grid;
  const double q = g.group().homogeneous_dim();
  const Ball ib = indicator_ball(g);
  const BallFamily fam = BallFamily::generate(g, cfg.family, {ib});
  const RegionMask m = mask_from_ball(ib, grid);
  const SampledField chi = indicator(m);
  const double alpha = cfg.alpha > 0.0 ? cfg.alpha : q / 2.0;
  for (double a : {0.0, alpha}) {
    const SampledField mx = fractional_maximal(chi, fam, a);
    const double want = std::pow(m.measure(), a / q);
    double err = 0.0;
    for (std::size_t i = 0; i < chi.size(); ++i)
      if (m.contains(i)) err = std::max(err, rel_err(mx[i], want));
    s.add("maximal-indicator(alpha=" + fmt(a) + ")", "M_alpha(chi_B) = |B|^{alpha/Q} on a distinguished B", -err,
          err <= cfg.tol.identity);
  }
  const SampledField sc = sharp_maximal(SampledField::constant(grid, 3.0), fam);
  const double smax = max_abs_over(sc, RegionMask::whole(grid));
  s.add("sharp-constant", "M#(c) = 0", -smax, smax == 0.0);

  const SampledField f = generate_field(CorpusTag{"random-smooth", 101.0}, grid, cfg.seed);
  const BallFamily nested = nested_family(g, ib, fam);
  const SampledField lhs = fractional_maximal(f * chi, nested, cfg.alpha);
  const SampledField rhs = local_maximal(f, ib, nested, cfg.alpha);
  double lerr = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (m.contains(i)) lerr = std::max(lerr, std::abs(lhs[i] - rhs[i]));
  s.add("local-identity", "M_alpha(f chi_B) = M_{alpha,B} f on B for a family nested over B", -lerr, lerr == 0.0);

  const BallFamily lean = BallFamily::generate(g, lean_family(g), {ib});
  PointwiseSuite total;
  std::size_t violations = 0;
  for (int k = 0; k < cfg.pairs; ++k) {
    const auto b = generate_field(CorpusTag{"random-smooth", 1000.0 + 2 * k}, grid, cfg.seed);
    const auto ff = generate_field(CorpusTag{"random-smooth", 1001.0 + 2 * k}, grid, cfg.seed);
    const auto ps = pointwise_suite(b, ff, ib, lean, cfg.beta, cfg.tol.pointwise);
    violations += ps.total_violations();
    total.nonneg_commutator.worst = std::min(total.nonneg_commutator.worst, ps.nonneg_commutator.worst);
    total.signed_commutator.worst = std::min(total.signed_commutator.worst, ps.signed_commutator.worst);
    total.mean_oscillation.worst = std::min(total.mean_oscillation.worst, ps.mean_oscillation.worst);
    total.lipschitz_domination.worst = std::min(total.lipschitz_domination.worst, ps.lipschitz_domination.worst);
  }
  s.add("pointwise-suite", "|[b,M]f| <= M_b f (b >= 0); |[b,M]f| <= M_b f + 2 b^- Mf; |b - b_B| <= M_b chi_B; M_b f <= C M_beta f",
        std::min({total.nonneg_commutator.worst, total.signed_commutator.worst, total.mean_oscillation.worst,
                  total.lipschitz_domination.worst}),
        violations == 0, std::to_string(violations) + " violations over " + std::to_string(cfg.pairs) + " pairs");

  if (g.node_count() <= 2048) {
    const auto b = generate_field(CorpusTag{"random-smooth", 7.0}, grid, cfg.seed);
    std::size_t mism = 0;
    for (auto op : {OperatorKind::maximal, OperatorKind::sharp, OperatorKind::maximal_commutator,
                    OperatorKind::commutator_maximal, OperatorKind::commutator_sharp}) {
      const auto fast = apply_operator(op, Backend::fast, &b, f, lean, cfg.alpha);
      const auto ref = apply_operator(op, Backend::reference, &b, f, lean, cfg.alpha);
      for (std::size_t i = 0; i < f.size(); ++i) mism += fast[i] == ref[i] ? 0 : 1;
    }
    s.add("oracle-equivalence", "fast kernels equal the brute-force reference bitwise", -static_cast<double>(mism),
          mism == 0, std::to_string(mism) + " differing nodes");
  }
}

void lipschitz_checks(Suite& s, const RunConfig& cfg, const GridPtr& grid) {
  const GridSpec& g = *grid;
  const double q = g.group().homogeneous_dim();
  std::optional<YoungFunction> psi;
  for (const auto& phi : cfg.young) {
    if (!phi.in_class_y()) continue;
    try {
      const YoungFunction ps = psi_from_phi(phi, cfg.beta, q);
      double err = 0.0;
      for (double t : log_grid(1e-10, 1e10, 81))
        err = std::max(err, rel_err(ps.inverse(t) * std::pow(t, cfg.beta / q), phi.inverse(t)));
      s.add("psi-round-trip(" + phi.label() + ")", "Psi^{-1}(t) t^{beta/Q} = Phi^{-1}(t)", -err, err <= 1e-6);
      if (!psi) psi = ps;
    } catch (const PsiConstructionError& e) {
      s.add("psi-round-trip(" + phi.label() + ")", "Psi^{-1}(t) t^{beta/Q} = Phi^{-1}(t)", 0.0, true,
            std::string("not admissible: ") + e.what());
    }
  }
  if (psi) {
    CharacOptions opt;
    opt.probe_count = 3;
    opt.family = lean_family(g);
    const auto probes = probe_balls(g, opt);
    const BallFamily fam = BallFamily::generate(g, opt.family, probes);
    const auto b = generate_field("gauge-power(" + fmt(cfg.beta) + ")", grid, cfg.seed);
    double margin = kInf;
    for (const Ball& ball : probes) {
      if (mask_from_ball(ball, grid).empty()) continue;
      const auto v = ball_functionals(b, ball, *psi, cfg.beta, fam);
      margin = std::min({margin, 2.0 * v.f1 * (1.0 + 1e-9) - v.f2, 2.0 * v.f3 * (1.0 + 1e-9) - v.f4});
    }
    s.add("mean-bound-chain", "F2 <= 2 F1 and F4 <= 2 F3 on every probe ball", margin, margin >= 0.0);
  }
  const auto& ctl = cfg.almost_decreasing;
  std::optional<YoungFunction> target = ctl.psi ? ctl.psi : psi;
  if (target) {
    const auto rep = almost_decreasing_check(*target, ctl.eps, 1e-6, 1e6, 241, ctl.k_threshold);
    s.add("almost-decreasing(" + target->label() + ")", "t^{1+eps}/Psi(t) is almost decreasing",
          ctl.k_threshold - rep.constant, rep.holds, "K = " + fmt(rep.constant) + ", eps = " + fmt(ctl.eps));
  }
}

}  // namespace

VerifyReport run_verify(const RunConfig& cfg) {
  VerifyReport rep;
  rep.seed = cfg.seed;
  const GridPtr grid = build_grid(cfg);
  rep.grid = grid->descriptor();
  Suite s{rep};
  auto corpus = generate_corpus(cfg.corpus, grid, cfg.seed);
  for (const auto& [name, path] : cfg.fields)
    if (auto f = load_named_field(cfg, name, grid)) corpus.push_back({"field:" + name, std::move(*f)});
  group_checks(s, *grid, cfg.seed);
  young_checks(s, cfg);
  norm_checks(s, cfg, grid, corpus);
  maximal_checks(s, cfg, grid);
  lipschitz_checks(s, cfg, grid);
  return rep;
}

}  // namespace maxlab
