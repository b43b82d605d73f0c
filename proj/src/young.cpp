#include "maxlab/young.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxlab {

namespace {

constexpr double kConvexSlack = 1e-9;

void validate_table(const YoungFunction::Tabulated& tab) {
  const auto& t = tab.t;
  const auto& v = tab.v;
  if (t.size() < 2 || t.size() != v.size())
    throw std::invalid_argument("tabulated Young function: need >= 2 (t, value) pairs");
  if (!(t.front() >= 0.0)) throw std::invalid_argument("tabulated Young function: negative t");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(v[i]) || v[i] < 0.0)
      throw std::invalid_argument("tabulated Young function: non-finite or negative entry at row " +
                                  std::to_string(i));
    if (i > 0 && !(t[i] > t[i - 1]))
      throw std::invalid_argument("tabulated Young function: breakpoints not increasing at row " +
                                  std::to_string(i));
    if (i > 0 && v[i] < v[i - 1])
      throw std::invalid_argument("tabulated Young function: values decrease at row " +
                                  std::to_string(i));
  }
  if (t.front() == 0.0 && v.front() != 0.0)
    throw std::invalid_argument("tabulated Young function: Phi(0) must be 0");
  if (t.front() > 0.0 && v.front() > 0.0 && !(tab.lower_exponent >= 1.0))
    throw std::invalid_argument("tabulated Young function: lower tail exponent must be >= 1");
  if (std::isnan(tab.upper_exponent) || !(tab.upper_exponent >= 1.0))
    throw std::invalid_argument("tabulated Young function: upper tail exponent must be >= 1");
  if (std::isfinite(tab.upper_exponent) && !(v.back() > 0.0))
    throw std::invalid_argument("tabulated Young function: Phi must grow to infinity");

  double prev_slope = -kInf;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double slope = (v[i + 1] - v[i]) / (t[i + 1] - t[i]);
    if (i == 0 && t.front() > 0.0) {
      // left derivative of the lower tail, or the chord from the origin
      const double left = v[0] > 0.0 ? tab.lower_exponent * v[0] / t[0] : 0.0;
      prev_slope = left;
    }
    const double scale = std::max(std::abs(slope), std::abs(prev_slope));
    if (slope < prev_slope - kConvexSlack * scale)
      throw std::invalid_argument("tabulated Young function: not convex at row " +
                                  std::to_string(i + 1));
    prev_slope = slope;
  }
  if (std::isfinite(tab.upper_exponent)) {
    const double right = tab.upper_exponent * v.back() / t.back();
    if (right < prev_slope - kConvexSlack * std::abs(prev_slope))
      throw std::invalid_argument("tabulated Young function: upper tail breaks convexity");
  }
}

double eval_table(const YoungFunction::Tabulated& tab, double x) {
  const auto& t = tab.t;
  const auto& v = tab.v;
  if (x <= t.front()) {
    if (t.front() == 0.0 || v.front() == 0.0) return x == t.front() ? v.front() : 0.0;
    return v.front() * std::pow(x / t.front(), tab.lower_exponent);
  }
  if (x > t.back()) {
    if (!std::isfinite(tab.upper_exponent)) return kInf;
    return v.back() * std::pow(x / t.back(), tab.upper_exponent);
  }
  const auto it = std::lower_bound(t.begin(), t.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - t.begin());
  if (t[j] == x) return v[j];
  const double w = (x - t[j - 1]) / (t[j] - t[j - 1]);
  return v[j - 1] + w * (v[j] - v[j - 1]);
}

double inverse_table(const YoungFunction::Tabulated& tab, double s) {
  const auto& t = tab.t;
  const auto& v = tab.v;
  if (s == kInf) return kInf;
  if (s < v.front()) return t.front() * std::pow(s / v.front(), 1.0 / tab.lower_exponent);
  // smallest j with v[j] > s
  const auto it = std::upper_bound(v.begin(), v.end(), s);
  if (it == v.end()) {
    if (!std::isfinite(tab.upper_exponent)) return t.back();
    return t.back() * std::pow(s / v.back(), 1.0 / tab.upper_exponent);
  }
  const std::size_t j = static_cast<std::size_t>(it - v.begin());
  if (j == 0) return t.front();
  return t[j - 1] + (s - v[j - 1]) * (t[j] - t[j - 1]) / (v[j] - v[j - 1]);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

YoungFunction YoungFunction::power(double p, double coef, std::string label) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("power Young function: p must be >= 1");
  if (!(coef > 0.0) || !std::isfinite(coef))
    throw std::invalid_argument("power Young function: coefficient must be positive");
  if (label.empty()) label = "power(" + std::to_string(p) + ")";
  return YoungFunction(Power{p, coef}, std::move(label));
}

YoungFunction YoungFunction::linfinity(double threshold, std::string label) {
  if (!(threshold > 0.0) || !std::isfinite(threshold))
    throw std::invalid_argument("linfinity Young function: threshold must be positive");
  if (label.empty()) label = "linfty";
  return YoungFunction(LInfinity{threshold}, std::move(label));
}

YoungFunction YoungFunction::tabulated(std::vector<double> t, std::vector<double> v,
                                       double lower_exponent, double upper_exponent,
                                       std::string label) {
  Tabulated tab{std::move(t), std::move(v), lower_exponent, upper_exponent};
  validate_table(tab);
  if (label.empty()) label = "tabulated";
  return YoungFunction(std::move(tab), std::move(label));
}

double YoungFunction::eval(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("Young function evaluated at negative argument");
  return std::visit(Overloaded{
                        [t](const Power& f) { return t == 0.0 ? 0.0 : f.coef * std::pow(t, f.p); },
                        [t](const LInfinity& f) { return t <= f.threshold ? 0.0 : kInf; },
                        [t](const Tabulated& f) { return eval_table(f, t); },
                    },
                    family_);
}

double YoungFunction::inverse(double s) const {
  if (!(s >= 0.0)) throw std::invalid_argument("Young inverse at negative argument");
  return std::visit(Overloaded{
                        [s](const Power& f) {
                          if (s == kInf) return kInf;
                          return std::pow(s / f.coef, 1.0 / f.p);
                        },
                        [s](const LInfinity& f) { return s == kInf ? kInf : f.threshold; },
                        [s](const Tabulated& f) { return inverse_table(f, s); },
                    },
                    family_);
}

bool YoungFunction::in_class_y() const {
  return std::visit(Overloaded{
                        [](const Power&) { return true; },
                        [](const LInfinity&) { return false; },
                        [](const Tabulated& f) {
                          if (!std::isfinite(f.upper_exponent)) return false;
                          for (std::size_t i = 0; i < f.t.size(); ++i)
                            if (f.t[i] > 0.0 && !(f.v[i] > 0.0)) return false;
                          return true;
                        },
                    },
                    family_);
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log_grid: need 0 < lo <= hi");
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = std::exp(a + step * static_cast<double>(i));
  out.front() = lo;
  out.back() = hi;
  return out;
}

double conjugate_value(const YoungFunction& phi, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("conjugate at negative argument");
  if (r == 0.0) return 0.0;
  const auto g = [&](double s) {
    const double p = phi(s);
    return p == kInf ? -kInf : r * s - p;
  };
  constexpr int kLo = -900;
  constexpr int kHi = 900;
  double best = 0.0;  // s = 0
  int best_k = kLo - 1;
  double prev = 0.0;
  bool rising_at_top = false;
  for (int k = kLo; k <= kHi; ++k) {
    const double v = g(std::ldexp(1.0, k));
    if (v > best) {
      best = v;
      best_k = k;
    }
    if (k == kHi) rising_at_top = v > prev && v > 0.0;
    prev = v;
  }
  if (rising_at_top && best_k == kHi) return kInf;
  // golden-section refinement around the ladder maximum (concave => unimodal)
  double a = best_k <= kLo ? 0.0 : std::ldexp(1.0, best_k - 1);
  double b = std::ldexp(1.0, std::min(best_k + 1, kHi));
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 300 && (b - a) > 1e-15 * b; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = g(x1);
    }
  }
  return std::max({best, f1, f2});
}

YoungFunction numeric_conjugate(const YoungFunction& phi, const ConjugateGrid& grid) {
  if (!(grid.r_min > 0.0) || !(grid.r_max > grid.r_min) || grid.per_decade < 2)
    throw std::invalid_argument("numeric_conjugate: bad grid");
  const auto decades = std::log10(grid.r_max / grid.r_min);
  const auto count = static_cast<std::size_t>(std::ceil(decades * grid.per_decade)) + 1;
  std::vector<double> r = log_grid(grid.r_min, grid.r_max, count);
  std::vector<double> c(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) c[i] = conjugate_value(phi, r[i]);

  // Extend downward if the finite domain ends below the grid.
  while (c.front() == kInf && r.front() > 1e-300) {
    r.insert(r.begin(), r.front() / 10.0);
    c.insert(c.begin(), conjugate_value(phi, r.front()));
  }
  if (c.front() == kInf) throw std::runtime_error("numeric_conjugate: conjugate is infinite everywhere");

  std::vector<double> t, v;
  double upper = kInf;
  std::size_t first_inf = c.size();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == kInf) {
      first_inf = i;
      break;
    }
  }
  t.assign(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(first_inf));
  v.assign(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(first_inf));
  // Enforce monotonicity against golden-section noise.
  for (std::size_t i = 1; i < v.size(); ++i) v[i] = std::max(v[i], v[i - 1]);

  if (first_inf < c.size()) {
    double lo = r[first_inf - 1], hi = r[first_inf];
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (conjugate_value(phi, mid) == kInf) hi = mid;
      else lo = mid;
    }
    if (lo > t.back()) {
      t.push_back(lo);
      v.push_back(std::max(conjugate_value(phi, lo), v.back()));
    }
    upper = kInf;
  } else {
    const std::size_t k = v.size() - 1;
    if (!(v[k] > 0.0) || !(v[k - 1] > 0.0))
      throw std::runtime_error("numeric_conjugate: conjugate does not grow on the grid");
    const double secant = std::log(v[k] / v[k - 1]) / std::log(t[k] / t[k - 1]);
    const double chord = (v[k] - v[k - 1]) / (t[k] - t[k - 1]) * t[k] / v[k];
    upper = std::max({1.0, secant, chord});
  }

  double lower = 1.0;
  if (v[0] > 0.0 && v[1] > 0.0) {
    const double secant = std::log(v[1] / v[0]) / std::log(t[1] / t[0]);
    const double chord = (v[1] - v[0]) / (t[1] - t[0]) * t[0] / v[0];
    lower = std::max(1.0, std::min(secant, chord));
  }
  return YoungFunction::tabulated(std::move(t), std::move(v), lower, upper,
                                  "conj[" + phi.label() + "]");
}

YoungFunction conjugate(const YoungFunction& phi) {
  const std::string label = "conj[" + phi.label() + "]";
  if (const auto* pw = std::get_if<YoungFunction::Power>(&phi.family())) {
    if (pw->p == 1.0) return YoungFunction::linfinity(pw->coef, label);
    const double p = pw->p;
    const double q = p / (p - 1.0);
    const double coef = (1.0 - 1.0 / p) * std::pow(pw->coef * p, -1.0 / (p - 1.0));
    return YoungFunction::power(q, coef, label);
  }
  if (const auto* li = std::get_if<YoungFunction::LInfinity>(&phi.family()))
    return YoungFunction::power(1.0, li->threshold, label);
  return numeric_conjugate(phi);
}

YoungPairReport check_young_pair(const YoungFunction& phi, std::span<const double> r_grid,
                                 ConjugateMode mode) {
  if (r_grid.empty()) throw std::invalid_argument("check_young_pair: empty grid");
  const YoungFunction conj = mode == ConjugateMode::numeric ? numeric_conjugate(phi) : conjugate(phi);
  YoungPairReport rep;
  for (double r : r_grid) {
    if (!(r > 0.0)) throw std::invalid_argument("check_young_pair: grid must be positive");
    const double ratio = phi.inverse(r) * conj.inverse(r) / r;
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    const bool ok = ratio >= 1.0 - 1e-6 && ratio <= 2.0 * (1.0 + 1e-6);
    if (!ok && rep.ok) {
      rep.ok = false;
      rep.offending_r = r;
    }
  }
  return rep;
}

namespace {

void check_range(double r_min, double r_max, int samples) {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw std::invalid_argument("growth check: bad range");
  if (r_max / r_min < 1e6 * (1.0 - 1e-12))
    throw std::invalid_argument("growth check: range must span at least six decades");
  if (samples < 100) throw std::invalid_argument("growth check: need at least 100 samples");
}

}  // namespace

GrowthReport check_delta2(const YoungFunction& phi, double r_min, double r_max, int samples) {
  check_range(r_min, r_max, samples);
  GrowthReport rep;
  rep.r_min = r_min;
  rep.r_max = r_max;
  rep.samples = samples;
  double worst = 1.0;
  for (double r : log_grid(r_min, r_max, static_cast<std::size_t>(samples))) {
    const double a = phi(r);
    const double b = phi(2.0 * r);
    if (a == 0.0 && b == 0.0) continue;
    if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b)) return rep;
    worst = std::max(worst, b / a);
  }
  rep.delta2_constant = worst;
  return rep;
}

GrowthReport check_nabla2(const YoungFunction& phi, double r_min, double r_max, int samples,
                          std::span<const double> c_grid) {
  check_range(r_min, r_max, samples);
  GrowthReport rep;
  rep.r_min = r_min;
  rep.r_max = r_max;
  rep.samples = samples;
  std::vector<double> cs(c_grid.begin(), c_grid.end());
  std::sort(cs.begin(), cs.end());
  const auto rs = log_grid(r_min, r_max, static_cast<std::size_t>(samples));
  for (double C : cs) {
    if (!(C > 1.0)) throw std::invalid_argument("check_nabla2: C grid must lie in (1, inf)");
    bool holds = true;
    for (double r : rs) {
      const double lhs = phi(r) * 2.0 * C;
      const double rhs = phi(C * r);
      if (rhs == kInf) continue;
      if (lhs > rhs * (1.0 + 1e-12)) {
        holds = false;
        break;
      }
    }
    if (holds) {
      rep.nabla2_constant = C;
      break;
    }
  }
  return rep;
}

double tabulated_loglog_slope(const YoungFunction& phi, double t_lo, double t_hi) {
  const auto* tab = std::get_if<YoungFunction::Tabulated>(&phi.family());
  if (!tab) throw std::invalid_argument("tabulated_loglog_slope: not a tabulated function");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < tab->t.size(); ++i) {
    if (tab->t[i] < t_lo || tab->t[i] > t_hi || !(tab->t[i] > 0.0) || !(tab->v[i] > 0.0)) continue;
    const double x = std::log(tab->t[i]), y = std::log(tab->v[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("tabulated_loglog_slope: fewer than two points in range");
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

}  // namespace maxlab
