#include "maxlab/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxlab/detail/ball_kernels.hpp"

namespace maxlab::reference {

namespace {

constexpr double kUnset = -std::numeric_limits<double>::infinity();

bool contains_node(const GridSpec& g, const Ball& ball, std::size_t node) {
  double x[3] = {};
  g.node_coords(node, x);
  return detail::node_in_ball(g, x, ball);
}

SampledField finish(const GridPtr& grid, std::vector<double> values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] == kUnset) throw UncoveredNodeError(i, grid->location(i));
  return SampledField(grid, std::move(values));
}

// Full-scan member lists, computed once per ball and reused for every node.
std::vector<std::vector<std::size_t>> scan_family(const GridSpec& g, const BallFamily& family) {
  std::vector<std::vector<std::size_t>> members(family.size());
  for (std::size_t k = 0; k < family.size(); ++k)
    detail::scan_members(g, family.balls()[k], [&](std::size_t j) { members[k].push_back(j); });
  return members;
}

double fractional_ball(const GridSpec& g, const SampledField& f, const std::vector<std::size_t>& members, double expo) {
  double sum = 0.0;
  for (std::size_t j : members) sum += std::abs(f[j]);
  const double m = static_cast<double>(members.size()) * g.cell_volume();
  return detail::fractional_value(m, expo, sum, g.cell_volume());
}

}  // namespace

SampledField fractional_maximal(const SampledField& f, const BallFamily& family, double alpha) {
  const GridSpec& g = f.grid();
  detail::require_alpha(g, alpha);
  const double expo = -1.0 + alpha / g.group().homogeneous_dim();
  const auto members = scan_family(g, family);
  std::vector<double> ball_value(family.size());
  for (std::size_t k = 0; k < family.size(); ++k) ball_value[k] = fractional_ball(g, f, members[k], expo);
  std::vector<double> out(g.node_count(), kUnset);
  for (std::size_t x = 0; x < g.node_count(); ++x)
    for (std::size_t k = 0; k < family.size(); ++k)
      if (contains_node(g, family.balls()[k], x)) out[x] = std::max(out[x], ball_value[k]);
  return finish(f.grid_ptr(), std::move(out));
}

SampledField local_maximal(const SampledField& f, const Ball& b0, const BallFamily& family, double alpha) {
  const GridSpec& g = f.grid();
  detail::require_alpha(g, alpha);
  const double expo = -1.0 + alpha / g.group().homogeneous_dim();
  std::vector<Ball> cands{b0};
  for (const Ball& ball : family.balls()) {
    bool inside = true;
    detail::scan_members(g, ball, [&](std::size_t j) { inside = inside && contains_node(g, b0, j); });
    if (inside) cands.push_back(ball);
  }
  const auto members = scan_family(g, BallFamily::from_balls(cands));
  std::vector<double> ball_value(cands.size());
  for (std::size_t k = 0; k < cands.size(); ++k) ball_value[k] = fractional_ball(g, f, members[k], expo);
  std::vector<double> out(g.node_count(), kUnset);
  for (std::size_t x = 0; x < g.node_count(); ++x) {
    if (!contains_node(g, b0, x)) {
      out[x] = 0.0;
      continue;
    }
    for (std::size_t k = 0; k < cands.size(); ++k)
      if (contains_node(g, cands[k], x)) out[x] = std::max(out[x], ball_value[k]);
  }
  return finish(f.grid_ptr(), std::move(out));
}

SampledField sharp_maximal(const SampledField& f, const BallFamily& family) {
  const GridSpec& g = f.grid();
  const double cell = g.cell_volume();
  const auto members = scan_family(g, family);
  std::vector<double> ball_value(family.size());
  for (std::size_t k = 0; k < family.size(); ++k) {
    const double m = static_cast<double>(members[k].size()) * cell;
    ball_value[k] = detail::oscillation_value(detail::oscillation_sum(f, members[k], cell, m), cell, m);
  }
  std::vector<double> out(g.node_count(), kUnset);
  for (std::size_t x = 0; x < g.node_count(); ++x)
    for (std::size_t k = 0; k < family.size(); ++k)
      if (contains_node(g, family.balls()[k], x)) out[x] = std::max(out[x], ball_value[k]);
  return finish(f.grid_ptr(), std::move(out));
}

SampledField maximal_commutator(const SampledField& b, const SampledField& f, const BallFamily& family,
                                double alpha) {
  const GridSpec& g = f.grid();
  require_same_grid(b.grid(), g, "maximal_commutator");
  detail::require_alpha(g, alpha);
  const double cell = g.cell_volume();
  const double expo = -1.0 + alpha / g.group().homogeneous_dim();
  const auto members = scan_family(g, family);
  std::vector<double> out(g.node_count(), kUnset);
  for (std::size_t x = 0; x < g.node_count(); ++x)
    for (std::size_t k = 0; k < family.size(); ++k) {
      if (!contains_node(g, family.balls()[k], x)) continue;
      double s = 0.0;
      for (std::size_t j : members[k]) s += detail::commutator_term(b[x], b[j], std::abs(f[j]));
      const double scale = std::pow(static_cast<double>(members[k].size()) * cell, expo);
      out[x] = std::max(out[x], scale * (s * cell));
    }
  return finish(f.grid_ptr(), std::move(out));
}

SampledField commutator_maximal(const SampledField& b, const SampledField& f, const BallFamily& family,
                                double alpha) {
  require_same_grid(b.grid(), f.grid(), "commutator_maximal");
  return b * reference::fractional_maximal(f, family, alpha) - reference::fractional_maximal(b * f, family, alpha);
}

SampledField commutator_sharp(const SampledField& b, const SampledField& f, const BallFamily& family) {
  require_same_grid(b.grid(), f.grid(), "commutator_sharp");
  return b * reference::sharp_maximal(f, family) - reference::sharp_maximal(b * f, family);
}

}  // namespace maxlab::reference
