#include "maxlab/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxlab {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kTiny = 1e-300;

/// inf{lambda : F(lambda) <= 1} for nonincreasing F, by geometric bisection
/// between machine-tiny and a doubled upper bracket.
template <class F>
NormResult gauge_bisect(F&& functional, double start_hi) {
  NormResult res;
  double hi = start_hi;
  int doublings = 0;
  while (functional(hi) > 1.0) {
    hi *= 2.0;
    if (++doublings > 2000 || !std::isfinite(hi))
      throw std::runtime_error("norm bisection: no feasible upper bracket");
  }
  double lo = kTiny;
  if (functional(lo) <= 1.0) {
    res.value = lo;
    res.bracket_lo = 0.0;
    res.bracket_hi = lo;
    return res;
  }
  int it = 0;
  while (hi - lo > 1e-13 * hi && it < kMaxIterations) {
    const double mid = std::sqrt(lo) * std::sqrt(hi);
    double m = (mid > lo && mid < hi) ? mid : 0.5 * (lo + hi);
    if (functional(m) <= 1.0) hi = m;
    else lo = m;
    ++it;
  }
  res.value = hi;
  res.iterations = it;
  res.bracket_lo = lo;
  res.bracket_hi = hi;
  res.converged = (hi - lo) / std::max(hi, 1.0) <= 1e-10;
  return res;
}

struct Magnitudes {
  std::vector<double> values;   // distinct positive magnitudes, ascending
  std::vector<double> tail;     // |{|f| >= values[j]}| as node counts
  double max_abs = 0.0;
};

Magnitudes collect_magnitudes(const SampledField& f, const RegionMask& region) {
  std::vector<double> mags;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (region.contains(i) && f[i] != 0.0) mags.push_back(std::abs(f[i]));
  std::sort(mags.begin(), mags.end());
  Magnitudes out;
  const std::size_t n = mags.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && mags[i] == mags[i - 1]) continue;
    out.values.push_back(mags[i]);
    out.tail.push_back(static_cast<double>(n - i));
  }
  out.max_abs = n ? mags.back() : 0.0;
  return out;
}

double weak_functional(const Magnitudes& m, const YoungFunction& phi, double cell, double lambda) {
  double w = 0.0;
  for (std::size_t j = 0; j < m.values.size(); ++j) {
    const double p = phi(m.values[j] / lambda);
    if (p == kInf) return kInf;
    w = std::max(w, p * m.tail[j] * cell);
  }
  return w;
}

}  // namespace

double orlicz_modular(const SampledField& f, const YoungFunction& phi, const RegionMask& region,
                      double lambda) {
  require_same_grid(f.grid(), region.grid(), "orlicz_modular");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!region.contains(i) || f[i] == 0.0) continue;
    const double p = phi(std::abs(f[i]) / lambda);
    if (p == kInf) return kInf;
    s += p;
  }
  return s * f.grid().cell_volume();
}

double weak_modular(const SampledField& f, const YoungFunction& phi, const RegionMask& region,
                    double lambda) {
  require_same_grid(f.grid(), region.grid(), "weak_modular");
  return weak_functional(collect_magnitudes(f, region), phi, f.grid().cell_volume(), lambda);
}

NormResult luxemburg_norm(const SampledField& f, const YoungFunction& phi, const RegionMask& region) {
  require_same_grid(f.grid(), region.grid(), "luxemburg_norm");
  const double mx = max_abs_over(f, region);
  if (mx == 0.0) return NormResult{};
  if (phi.is_linfinity()) {
    const double thr = std::get<YoungFunction::LInfinity>(phi.family()).threshold;
    const double v = mx / thr;
    return NormResult{v, 0, v, v, true};
  }
  return gauge_bisect([&](double lam) { return orlicz_modular(f, phi, region, lam); },
                      mx * region.measure() + 1.0);
}

NormResult weak_norm(const SampledField& f, const YoungFunction& phi, const RegionMask& region) {
  require_same_grid(f.grid(), region.grid(), "weak_norm");
  const Magnitudes mags = collect_magnitudes(f, region);
  if (mags.values.empty()) return NormResult{};
  if (phi.is_linfinity()) {
    const double thr = std::get<YoungFunction::LInfinity>(phi.family()).threshold;
    const double v = mags.max_abs / thr;
    return NormResult{v, 0, v, v, true};
  }
  const double cell = f.grid().cell_volume();
  return gauge_bisect([&](double lam) { return weak_functional(mags, phi, cell, lam); },
                      mags.max_abs * region.measure() + 1.0);
}

double InequalityCheck::slack() const {
  return (rhs - lhs) / std::max(std::abs(rhs), 1e-300);
}

InequalityCheck holder_check(const SampledField& f, const SampledField& g, const YoungFunction& phi,
                             const RegionMask& region) {
  require_same_grid(f.grid(), g.grid(), "holder_check");
  require_same_grid(f.grid(), region.grid(), "holder_check");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (region.contains(i)) s += std::abs(f[i] * g[i]);
  InequalityCheck c;
  c.lhs = s * f.grid().cell_volume();
  const YoungFunction conj = conjugate(phi);
  c.rhs = 2.0 * luxemburg_norm(f, phi, region).value * luxemburg_norm(g, conj, region).value;
  c.ok = c.lhs <= c.rhs * (1.0 + 1e-6);
  return c;
}

InequalityCheck mean_bound_check(const SampledField& f, const YoungFunction& phi, const RegionMask& ball) {
  if (ball.empty()) throw std::domain_error("mean_bound_check: ball holds no grid node");
  InequalityCheck c;
  c.lhs = integrate(abs(f), ball);
  const double m = ball.measure();
  c.rhs = 2.0 * m * phi.inverse(1.0 / m) * luxemburg_norm(f, phi, ball).value;
  c.ok = c.lhs <= c.rhs * (1.0 + 1e-6);
  return c;
}

InequalityCheck mean_bound_check(const SampledField& f, const YoungFunction& phi, const Ball& ball) {
  return mean_bound_check(f, phi, mask_from_ball(ball, f.grid_ptr()));
}

}  // namespace maxlab
