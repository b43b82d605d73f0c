#include "maxlab/group.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "maxlab/rng.hpp"

namespace maxlab {

GroupPoint::GroupPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  for (double c : coords_) {
    if (!std::isfinite(c)) throw std::invalid_argument("GroupPoint: non-finite coordinate");
  }
}

GroupSpec::GroupSpec(GroupKind kind, std::vector<int> weights)
    : kind_(kind), weights_(std::move(weights)), q_(0) {
  for (int w : weights_) q_ += w;
}

GroupSpec GroupSpec::euclidean(int n) {
  if (n < 1) throw std::invalid_argument("euclidean: dimension must be positive");
  return GroupSpec(GroupKind::euclidean, std::vector<int>(static_cast<std::size_t>(n), 1));
}

GroupSpec GroupSpec::heisenberg1() { return GroupSpec(GroupKind::heisenberg1, {1, 1, 2}); }

double GroupSpec::c1() const {
  if (!calibration_) throw std::logic_error(name() + ": c1 requested before calibration");
  return calibration_->c1;
}

double GroupSpec::c0() const {
  if (!calibration_) throw std::logic_error(name() + ": c0 requested before calibration");
  return calibration_->c0;
}

GroupSpec GroupSpec::with_calibration(const GroupCalibration& cal) const {
  if (!(cal.c1 > 0.0) || !std::isfinite(cal.c1))
    throw std::invalid_argument("calibration: c1 must be positive");
  if (!(cal.c0 >= 1.0) || !std::isfinite(cal.c0))
    throw std::invalid_argument("calibration: c0 must be >= 1");
  GroupSpec out = *this;
  out.calibration_ = cal;
  return out;
}

std::string GroupSpec::name() const {
  if (kind_ == GroupKind::heisenberg1) return "heisenberg1";
  return "euclidean(" + std::to_string(coord_dim()) + ")";
}

Ball::Ball(GroupPoint center, double radius) : center_(std::move(center)), radius_(radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("Ball: radius must be positive and finite");
}

namespace {

void check_dim(const GroupPoint& g, const GroupSpec& spec, const char* what) {
  if (static_cast<int>(g.dim()) != spec.coord_dim()) {
    throw std::invalid_argument(std::string(what) + ": point of dimension " +
                                std::to_string(g.dim()) + " for " + spec.name());
  }
}

}  // namespace

GroupPoint group_mul(const GroupPoint& g, const GroupPoint& h, const GroupSpec& spec) {
  check_dim(g, spec, "group_mul");
  check_dim(h, spec, "group_mul");
  std::vector<double> out(g.dim());
  for (std::size_t i = 0; i < g.dim(); ++i) out[i] = g[i] + h[i];
  if (spec.kind() == GroupKind::heisenberg1) out[2] += 0.5 * (g[0] * h[1] - g[1] * h[0]);
  return GroupPoint(std::move(out));
}

GroupPoint group_inv(const GroupPoint& g, const GroupSpec& spec) {
  check_dim(g, spec, "group_inv");
  std::vector<double> out(g.dim());
  for (std::size_t i = 0; i < g.dim(); ++i) out[i] = -g[i];
  return GroupPoint(std::move(out));
}

GroupPoint group_identity(const GroupSpec& spec) {
  return GroupPoint(std::vector<double>(static_cast<std::size_t>(spec.coord_dim()), 0.0));
}

GroupPoint dilate(const GroupPoint& g, double s, const GroupSpec& spec) {
  check_dim(g, spec, "dilate");
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("dilate: s must be positive");
  std::vector<double> out(g.dim());
  const auto& w = spec.dilation_weights();
  for (std::size_t i = 0; i < g.dim(); ++i) out[i] = std::pow(s, w[i]) * g[i];
  return GroupPoint(std::move(out));
}

double hom_norm(const GroupPoint& g, const GroupSpec& spec) {
  check_dim(g, spec, "hom_norm");
  return detail::gauge(spec.kind(), spec.coord_dim(), g.data());
}

bool ball_contains(const Ball& ball, const GroupPoint& g, const GroupSpec& spec) {
  check_dim(g, spec, "ball_contains");
  check_dim(ball.center(), spec, "ball_contains");
  return detail::in_ball(spec.kind(), spec.coord_dim(), g.data(), ball.center().data(),
                         ball.radius());
}

double ball_volume(const Ball& ball, const GroupSpec& spec) {
  if (!spec.calibrated()) throw std::logic_error("ball_volume: " + spec.name() + " is uncalibrated");
  return spec.c1() * std::pow(ball.radius(), spec.homogeneous_dim());
}

namespace {

double unit_ball_volume(const GroupSpec& spec, int res) {
  const int d = spec.coord_dim();
  const double h = 2.0 / res;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> x(static_cast<std::size_t>(d));
  std::size_t count = 0;
  while (true) {
    for (int k = 0; k < d; ++k) x[k] = -1.0 + h * (idx[k] + 0.5);
    if (detail::gauge(spec.kind(), d, x.data()) < 1.0) ++count;
    int k = d - 1;
    while (k >= 0 && ++idx[k] == res) idx[k--] = 0;
    if (k < 0) break;
  }
  return static_cast<double>(count) * std::pow(h, d);
}

using Pair = std::array<double, 6>;

double triangle_ratio(const Pair& p) {
  const double* g = p.data();
  const double* h = p.data() + 3;
  const double gh[3] = {g[0] + h[0], g[1] + h[1], g[2] + h[2] + 0.5 * (g[0] * h[1] - g[1] * h[0])};
  const double denom = detail::gauge(GroupKind::heisenberg1, 3, g) +
                       detail::gauge(GroupKind::heisenberg1, 3, h);
  if (!(denom > 0.0)) return 0.0;
  return detail::gauge(GroupKind::heisenberg1, 3, gh) / denom;
}

Pair refine(Pair p) {
  double best = triangle_ratio(p);
  double step = 0.1;
  while (step > 1e-10) {
    bool improved = false;
    for (std::size_t k = 0; k < p.size(); ++k) {
      for (double dir : {1.0, -1.0}) {
        Pair q = p;
        q[k] += dir * step * std::max(1.0, std::abs(q[k]));
        const double v = triangle_ratio(q);
        if (v > best) {
          best = v;
          p = q;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return p;
}

double estimate_c0_heisenberg(std::size_t samples, std::uint64_t seed) {
  CounterRng rng(seed, "calibrate.c0");
  std::vector<std::pair<double, Pair>> top;
  const std::size_t keep = 8;
  for (std::size_t s = 0; s < samples; ++s) {
    Pair p;
    // g on the unit gauge sphere, h at a log-uniform scale.
    for (double& v : p) v = rng.normal();
    const double rg = detail::gauge(GroupKind::heisenberg1, 3, p.data());
    const double rh = detail::gauge(GroupKind::heisenberg1, 3, p.data() + 3);
    if (!(rg > 0.0) || !(rh > 0.0)) continue;
    const double lam = std::pow(10.0, rng.uniform(-2.0, 2.0));
    p[0] /= rg, p[1] /= rg, p[2] /= rg * rg;
    const double sh = lam / rh;
    p[3] *= sh, p[4] *= sh, p[5] *= sh * sh;
    const double v = triangle_ratio(p);
    if (top.size() < keep || v > top.back().first) {
      top.emplace_back(v, p);
      std::sort(top.begin(), top.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
      if (top.size() > keep) top.pop_back();
    }
  }
  double best = 1.0;
  for (const auto& [v, p] : top) best = std::max({best, v, triangle_ratio(refine(p))});
  return best;
}

}  // namespace

GroupSpec calibrate_constants(const GroupSpec& spec, const CalibrationOptions& opts) {
  int res = opts.resolution;
  if (res == 0) res = spec.coord_dim() == 1 ? 4096 : spec.coord_dim() == 2 ? 1024 : 160;
  if (res < 32) throw std::invalid_argument("calibrate_constants: resolution below 32 per axis");
  GroupCalibration cal;
  cal.resolution = res;
  cal.c1 = unit_ball_volume(spec, res);
  if (spec.kind() == GroupKind::euclidean) {
    cal.c0 = 1.0;
    cal.c0_samples = 0;
  } else {
    cal.c0 = estimate_c0_heisenberg(opts.c0_samples, opts.seed);
    cal.c0_samples = opts.c0_samples;
  }
  return spec.with_calibration(cal);
}

}  // namespace maxlab
