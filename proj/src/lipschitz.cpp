#include "maxlab/lipschitz.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "maxlab/detail/ball_kernels.hpp"
#include "maxlab/orlicz.hpp"
#include "maxlab/rng.hpp"

namespace maxlab {

namespace {

double exponent_q(const GridSpec& g) { return static_cast<double>(g.group().homogeneous_dim()); }

void require_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
}

double pair_gauge(const GridSpec& g, std::size_t i, std::size_t j) {
  double x[3] = {}, y[3] = {};
  g.node_coords(i, x);
  g.node_coords(j, y);
  return detail::relative_gauge(g.group().kind(), g.group().coord_dim(), y, x);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double weight1_spacing(const GridSpec& g) { return default_min_radius(g) / 2.0; }

double weight1_extent(const GridSpec& g) {
  double len = kInf;
  const auto& w = g.group().dilation_weights();
  for (int k = 0; k < g.dim(); ++k)
    if (w[static_cast<std::size_t>(k)] == 1)
      len = std::min(len, g.hi()[static_cast<std::size_t>(k)] - g.lo()[static_cast<std::size_t>(k)]);
  return len;
}

}  // namespace

std::optional<double> LipEstimate::ratio() const {
  if (ball_norm > 0.0) return pair_norm / ball_norm;
  return std::nullopt;
}

LipEstimate lipschitz_estimate(const SampledField& b, double beta, const BallFamily& family,
                               std::size_t pair_budget, std::uint64_t seed) {
  require_beta(beta);
  if (pair_budget < 1000) throw std::invalid_argument("lipschitz_estimate: pair budget must be >= 1000");
  if (family.empty()) throw std::invalid_argument("lipschitz_estimate: empty ball family");
  const GridSpec& g = b.grid();
  LipEstimate est;
  est.beta = beta;
  CounterRng rng(seed, "lipschitz-pairs");
  for (std::size_t k = 0; k < pair_budget; ++k) {
    const std::size_t i = rng.index(g.node_count());
    const std::size_t j = rng.index(g.node_count());
    const double d = pair_gauge(g, i, j);
    if (d <= 0.0) continue;
    ++est.pairs;
    est.pair_norm = std::max(est.pair_norm, std::abs(b[i] - b[j]) / std::pow(d, beta));
  }
  for (const Ball& ball : family.balls()) est.ball_norm = std::max(est.ball_norm, ball_lipschitz(b, ball, beta));
  return est;
}

double lipschitz_seminorm(const SampledField& b, double beta) {
  require_beta(beta);
  const GridSpec& g = b.grid();
  const auto n = static_cast<std::ptrdiff_t>(g.node_count());
  double best = 0.0;
#pragma omp parallel for schedule(dynamic, 16) reduction(max : best)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    for (std::ptrdiff_t j = i + 1; j < n; ++j) {
      const double d = pair_gauge(g, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      if (d > 0.0)
        best = std::max(best, std::abs(b[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(j)]) / std::pow(d, beta));
    }
  return best;
}

double ball_lipschitz(const SampledField& b, const Ball& ball, double beta) {
  const GridSpec& g = b.grid();
  std::vector<std::size_t> mem;
  detail::enumerate_members(g, ball, mem);
  if (mem.empty()) return 0.0;
  const double cell = g.cell_volume();
  const double m = static_cast<double>(mem.size()) * cell;
  return std::pow(m, -1.0 - beta / exponent_q(g)) * (detail::oscillation_sum(b, mem, cell, m) * cell);
}

double pointwise_lipschitz_constant(const SampledField& b, double beta, const BallFamily& family,
                                    std::optional<double> seminorm) {
  const GridSpec& g = b.grid();
  const double q = exponent_q(g);
  const double lip = seminorm ? *seminorm : lipschitz_seminorm(b, beta);
  double worst = 0.0;
  for (const Ball& ball : family.balls()) {
    std::size_t count = 0;
    detail::for_each_member(g, ball, [&](std::size_t) {
      ++count;
      return true;
    });
    if (count == 0) continue;
    const double m = static_cast<double>(count) * g.cell_volume();
    worst = std::max(worst, std::pow(ball.radius(), q) / m);
  }
  return lip * std::pow(2.0 * g.group().c0(), beta) * std::pow(worst, beta / q);
}

PsiConstructionError::PsiConstructionError(double t_lo, double t_hi)
    : std::invalid_argument("Phi^{-1}(t) t^{-beta/Q} is not strictly increasing on [" + fmt(t_lo) + ", " +
                            fmt(t_hi) + "]"),
      t_lo_(t_lo),
      t_hi_(t_hi) {}

YoungFunction psi_from_phi(const YoungFunction& phi, double beta, double q, const PsiOptions& opts) {
  require_beta(beta);
  if (!(q > 0.0)) throw std::invalid_argument("psi_from_phi: Q must be positive");
  if (!(opts.t_min > 0.0 && opts.t_max > opts.t_min) || opts.per_decade < 2)
    throw std::invalid_argument("psi_from_phi: bad sampling range");
  const auto count = static_cast<std::size_t>(std::ceil(std::log10(opts.t_max / opts.t_min) * opts.per_decade)) + 1;
  const auto ts = log_grid(opts.t_min, opts.t_max, count);
  std::vector<double> u(ts.size());
  for (std::size_t j = 0; j < ts.size(); ++j) u[j] = phi.inverse(ts[j]) * std::pow(ts[j], -beta / q);
  for (std::size_t j = 0; j + 1 < u.size(); ++j)
    if (!(std::isfinite(u[j + 1]) && u[j + 1] > u[j] * (1.0 + 1e-9))) throw PsiConstructionError(ts[j], ts[j + 1]);
  const std::size_t n = u.size();
  const double lower = std::log(ts[1] / ts[0]) / std::log(u[1] / u[0]);
  const double upper = std::log(ts[n - 1] / ts[n - 2]) / std::log(u[n - 1] / u[n - 2]);
  std::string label = "psi(" + (phi.label().empty() ? std::string("phi") : phi.label()) + ", beta=" + fmt(beta) +
                      ", Q=" + fmt(q) + ")";
  return YoungFunction::tabulated(std::move(u), std::vector<double>(ts.begin(), ts.end()), std::max(1.0, lower),
                                  std::max(1.0, upper), std::move(label));
}

namespace {

// Balls meeting the node set of `ball`, plus a cover ball so every node of
// the grid stays covered.
BallFamily meeting_family(const GridSpec& g, const RegionMask& mask, const BallFamily& family) {
  std::vector<Ball> kept;
  for (const Ball& other : family.balls()) {
    const bool disjoint = detail::for_each_member(g, other, [&](std::size_t i) { return !mask.contains(i); });
    if (!disjoint) kept.push_back(other);
  }
  kept.push_back(cover_ball(g));
  return BallFamily::from_balls(std::move(kept));
}

}  // namespace

BallFunctionals ball_functionals(const SampledField& b, const Ball& ball, const YoungFunction& psi, double beta,
                                 const BallFamily& family) {
  require_beta(beta);
  const GridSpec& g = b.grid();
  const RegionMask mask = mask_from_ball(ball, b.grid_ptr());
  if (mask.empty()) throw std::domain_error("ball_functionals: ball holds no grid node");
  const double q = exponent_q(g);
  const double m = mask.measure();
  const double orlicz_scale = std::pow(m, -beta / q) * psi.inverse(1.0 / m);
  const double l1_scale = std::pow(m, -1.0 - beta / q);

  BallFunctionals out;
  out.measure = m;
  const SampledField g1 = b - local_maximal(b, ball, family, 0.0);
  out.f1 = orlicz_scale * luxemburg_norm(g1, psi, mask).value;
  out.f2 = l1_scale * integrate(abs(g1), mask);

  const SampledField chi = indicator(mask);
  const SampledField sharp = sharp_maximal(b * chi, meeting_family(g, mask, family));
  const SampledField g3 = b - scale(sharp, 2.0);
  out.f3 = orlicz_scale * luxemburg_norm(g3, psi, mask).value;
  out.f4 = l1_scale * integrate(abs(g3), mask);
  out.lip_ball = ball_lipschitz(b, ball, beta);
  return out;
}

double functional_f1(const SampledField& b, const Ball& ball, const YoungFunction& psi, double beta,
                     const BallFamily& family) {
  return ball_functionals(b, ball, psi, beta, family).f1;
}

double functional_f2(const SampledField& b, const Ball& ball, double beta, const BallFamily& family) {
  require_beta(beta);
  const GridSpec& g = b.grid();
  const RegionMask mask = mask_from_ball(ball, b.grid_ptr());
  if (mask.empty()) throw std::domain_error("functional_f2: ball holds no grid node");
  const SampledField g1 = b - local_maximal(b, ball, family, 0.0);
  return std::pow(mask.measure(), -1.0 - beta / exponent_q(g)) * integrate(abs(g1), mask);
}

double functional_f3(const SampledField& b, const Ball& ball, const YoungFunction& psi, double beta,
                     const BallFamily& family) {
  return ball_functionals(b, ball, psi, beta, family).f3;
}

double functional_f4(const SampledField& b, const Ball& ball, double beta, const BallFamily& family) {
  require_beta(beta);
  const GridSpec& g = b.grid();
  const RegionMask mask = mask_from_ball(ball, b.grid_ptr());
  if (mask.empty()) throw std::domain_error("functional_f4: ball holds no grid node");
  const SampledField sharp = sharp_maximal(b * indicator(mask), meeting_family(g, mask, family));
  return std::pow(mask.measure(), -1.0 - beta / exponent_q(g)) * integrate(abs(b - scale(sharp, 2.0)), mask);
}

RatioTable operator_ratio(OperatorKind op, const SampledField* b, const std::vector<NamedField>& corpus,
                          const YoungFunction& phi, const YoungFunction& psi, const BallFamily& family,
                          double alpha, bool weak) {
  if (corpus.empty()) throw std::invalid_argument("operator_ratio: empty corpus");
  RatioTable table;
  table.op = op;
  table.weak = weak;
  for (const auto& item : corpus) {
    const RegionMask whole = RegionMask::whole(item.field.grid_ptr());
    const double src = luxemburg_norm(item.field, phi, whole).value;
    if (!(src > 0.0)) {
      table.notes.push_back("skipped " + item.id + ": zero source norm");
      continue;
    }
    const SampledField tf = apply_operator(op, Backend::fast, b, item.field, family, alpha);
    const double dst = weak ? weak_norm(tf, psi, whole).value : luxemburg_norm(tf, psi, whole).value;
    table.rows.push_back({item.id, dst, src, dst / src});
    table.sup_ratio = std::max(table.sup_ratio, dst / src);
  }
  return table;
}

AlmostDecreasingReport almost_decreasing_check(const YoungFunction& psi, double eps, double t_min, double t_max,
                                               int samples, double k_threshold) {
  if (!(eps > 0.0)) throw std::invalid_argument("almost_decreasing_check: eps must be positive");
  if (samples < 1 || !(t_min > 0.0) || t_max < t_min)
    throw std::invalid_argument("almost_decreasing_check: bad sampling range");
  AlmostDecreasingReport rep;
  const auto ts = samples == 1 ? std::vector<double>{t_min} : log_grid(t_min, t_max, static_cast<std::size_t>(samples));
  double lowest = kInf, lowest_t = ts.front();
  for (double t : ts) {
    const double p = psi(t);
    const double h = p == 0.0 ? kInf : std::pow(t, 1.0 + eps) / p;
    if (std::isfinite(lowest) && h / lowest > rep.constant) {
      rep.constant = h / lowest;
      rep.t1 = lowest_t;
      rep.t2 = t;
    }
    if (h < lowest) {
      lowest = h;
      lowest_t = t;
    }
  }
  rep.holds = rep.constant <= k_threshold;
  return rep;
}

std::vector<Ball> probe_balls(const GridSpec& grid, const CharacOptions& options) {
  std::vector<GroupPoint> centers = options.centers;
  if (centers.empty()) {
    if (options.probe_count < 1) throw std::invalid_argument("characterization: probe count must be >= 1");
    // The box center first, so that a gauge-singular b is probed at its singularity.
    auto diagonal_node = [&](double frac) {
      std::vector<double> c(static_cast<std::size_t>(grid.dim()));
      for (int a = 0; a < grid.dim(); ++a) {
        const auto ax = grid.axis_coords(a);
        const auto i = static_cast<std::size_t>(std::lround(frac * static_cast<double>(ax.size() - 1)));
        c[static_cast<std::size_t>(a)] = ax[i];
      }
      return GroupPoint(std::move(c));
    };
    centers.push_back(diagonal_node(0.5));
    for (int k = 0; k < options.probe_count; ++k) {
      GroupPoint c = diagonal_node((k + 0.5) / options.probe_count);
      if (std::find(centers.begin(), centers.end(), c) == centers.end()) centers.push_back(std::move(c));
    }
  }
  std::vector<double> radii = options.radii;
  if (radii.empty()) {
    const double h = weight1_spacing(grid);
    const double rmax = 0.25 * weight1_extent(grid);
    for (double r = 4.0 * h; r <= rmax * (1.0 + 1e-9); r *= 2.0) radii.push_back(r);
    if (radii.empty()) radii.push_back(4.0 * h);
  }
  std::sort(radii.begin(), radii.end());
  std::vector<Ball> balls;
  for (double r : radii)
    for (const auto& c : centers) balls.emplace_back(c, r);
  return balls;
}

CharacterizationReport characterization_report(const SampledField& b, double beta, const YoungFunction& phi,
                                               const CharacOptions& options) {
  require_beta(beta);
  const GridSpec& g = b.grid();
  CharacterizationReport rep;
  rep.beta = beta;
  rep.phi_label = phi.label();
  const YoungFunction psi = psi_from_phi(phi, beta, exponent_q(g));
  rep.psi_label = psi.label();

  const auto probes = probe_balls(g, options);
  const BallFamily family = BallFamily::generate(g, options.family, probes);
  const std::size_t per_radius = options.centers.empty() ? static_cast<std::size_t>(options.probe_count)
                                                         : options.centers.size();
  for (std::size_t k = 0; k < probes.size(); ++k) {
    if (mask_from_ball(probes[k], b.grid_ptr()).empty()) continue;
    BallRow row;
    row.id = k;
    row.probe = k % per_radius;
    row.ball = probes[k];
    row.values = ball_functionals(b, probes[k], psi, beta, family);
    rep.per_ball.push_back(row);
  }
  for (const auto& row : rep.per_ball) {
    rep.sup_f1 = std::max(rep.sup_f1, row.values.f1);
    rep.sup_f2 = std::max(rep.sup_f2, row.values.f2);
    rep.sup_f3 = std::max(rep.sup_f3, row.values.f3);
    rep.sup_f4 = std::max(rep.sup_f4, row.values.f4);
    rep.sup_lip = std::max(rep.sup_lip, row.values.lip_ball);
    if (rep.per_radius.empty() || rep.per_radius.back().radius != row.ball.radius())
      rep.per_radius.push_back({.radius = row.ball.radius()});
    auto& rr = rep.per_radius.back();
    rr.f1 = std::max(rr.f1, row.values.f1);
    rr.f2 = std::max(rr.f2, row.values.f2);
    rr.f3 = std::max(rr.f3, row.values.f3);
    rr.f4 = std::max(rr.f4, row.values.f4);
    rr.lip_ball = std::max(rr.lip_ball, row.values.lip_ball);
  }

  // Scale stability of the L1 mean-oscillation functional.
  double lo = kInf, hi = 0.0;
  for (const auto& rr : rep.per_radius) {
    lo = std::min(lo, rr.f2);
    hi = std::max(hi, rr.f2);
  }
  if (rep.per_radius.empty() || hi <= options.vanish_tolerance) {
    rep.stability = 1.0;
    rep.scale_stable = true;
    rep.verdict_notes.push_back("functional sups vanish (sup F2 = " + fmt(hi) + ")");
  } else {
    rep.stability = lo > 0.0 ? hi / lo : kInf;
    rep.scale_stable = rep.stability <= options.stability_factor;
    rep.verdict_notes.push_back(std::string(rep.scale_stable ? "sups scale-stable" : "sups not scale-stable") +
                                ": max/min of per-radius sup F2 = " + fmt(rep.stability) + " over radii [" +
                                fmt(rep.per_radius.front().radius) + ", " + fmt(rep.per_radius.back().radius) + "]");
  }

  // Sign diagnostic: averages of b^- over the smallest probe balls.
  const SampledField neg = negative_part(b);
  const RegionMask whole = RegionMask::whole(b.grid_ptr());
  const double cell_fraction = weight1_spacing(g) / weight1_extent(g);
  rep.negative_threshold = options.sign_factor * max_abs_over(b, whole) * cell_fraction;
  if (!rep.per_ball.empty()) {
    const double r0 = rep.per_ball.front().ball.radius();
    for (const auto& row : rep.per_ball) {
      if (row.ball.radius() != r0) break;
      rep.negative_average =
          std::max(rep.negative_average, average_over(neg, mask_from_ball(row.ball, b.grid_ptr())));
    }
  }
  rep.negative_part = rep.negative_average > rep.negative_threshold;
  rep.verdict_notes.push_back(rep.negative_part ? "sign diagnostic: negative part detected (max small-ball average of b^- = " +
                                                      fmt(rep.negative_average) + " > " + fmt(rep.negative_threshold) + ")"
                                                : "sign diagnostic: nonnegative (max small-ball average of b^- = " +
                                                      fmt(rep.negative_average) + " <= " +
                                                      fmt(rep.negative_threshold) + ")");

  if (options.operator_ratios && !options.corpus.empty()) {
    const BallFamily opfam = BallFamily::generate(g, options.operator_family);
    for (OperatorKind op : {OperatorKind::maximal_commutator, OperatorKind::commutator_maximal,
                            OperatorKind::commutator_sharp}) {
      rep.ratios.push_back(operator_ratio(op, &b, options.corpus, phi, psi, opfam, 0.0, false));
      rep.sup_ratio = std::max(rep.sup_ratio, rep.ratios.back().sup_ratio);
    }
    rep.verdict_notes.push_back("operator ratios are lower bounds over a " + std::to_string(options.corpus.size()) +
                                "-field corpus; sup = " + fmt(rep.sup_ratio));
  }
  return rep;
}

}  // namespace maxlab
