#include "maxlab/maximal.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxlab/detail/ball_kernels.hpp"
#include "maxlab/reference.hpp"

namespace maxlab {

namespace detail {

void require_alpha(const GridSpec& grid, double alpha) {
  const double q = grid.group().homogeneous_dim();
  if (!(alpha >= 0.0 && alpha < q))
    throw std::invalid_argument("alpha must satisfy 0 <= alpha < Q = " + std::to_string(q));
}

}  // namespace detail

namespace {

constexpr double kUnset = -std::numeric_limits<double>::infinity();

// Per-thread scatter buffers merged by max. `visit(ball, members, out)`
// raises out[i] for the members of one ball; max is order independent, so
// the result does not depend on the schedule.
template <class Visit>
std::vector<double> scatter_max(const GridSpec& g, std::span<const Ball> balls, Visit visit) {
  const std::size_t n = g.node_count();
  const int threads = omp_get_max_threads();
  std::vector<std::vector<double>> bufs(static_cast<std::size_t>(threads));
  const auto nb = static_cast<std::ptrdiff_t>(balls.size());
#pragma omp parallel
  {
    auto& out = bufs[static_cast<std::size_t>(omp_get_thread_num())];
    out.assign(n, kUnset);
    std::vector<std::size_t> members;
#pragma omp for schedule(dynamic, 4)
    for (std::ptrdiff_t k = 0; k < nb; ++k) {
      members.clear();
      detail::enumerate_members(g, balls[static_cast<std::size_t>(k)], members);
      if (!members.empty()) visit(members, out);
    }
  }
  std::vector<double> result;
  for (auto& b : bufs) {
    if (b.empty()) continue;
    if (result.empty()) {
      result = std::move(b);
      continue;
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
      result[static_cast<std::size_t>(i)] = std::max(result[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]);
  }
  return result;
}

SampledField finish(const GridPtr& grid, std::vector<double> values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] == kUnset) throw UncoveredNodeError(i, grid->location(i));
  return SampledField(grid, std::move(values));
}

std::vector<double> abs_values(const SampledField& f) {
  std::vector<double> a(f.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(f[i]);
  return a;
}

std::vector<double> fractional_scatter(const GridSpec& g, std::span<const double> af,
                                       std::span<const Ball> balls, double alpha) {
  const double cell = g.cell_volume();
  const double expo = -1.0 + alpha / g.group().homogeneous_dim();
  return scatter_max(g, balls, [&](const std::vector<std::size_t>& mem, std::vector<double>& out) {
    double sum = 0.0;
    for (auto i : mem) sum += af[i];
    const double m = static_cast<double>(mem.size()) * cell;
    const double v = detail::fractional_value(m, expo, sum, cell);
    for (auto i : mem) out[i] = std::max(out[i], v);
  });
}

}  // namespace

SampledField fractional_maximal(const SampledField& f, const BallFamily& family, double alpha) {
  const GridSpec& g = f.grid();
  detail::require_alpha(g, alpha);
  const auto af = abs_values(f);
  return finish(f.grid_ptr(), fractional_scatter(g, af, family.balls(), alpha));
}

SampledField local_maximal(const SampledField& f, const Ball& b0, const BallFamily& family, double alpha) {
  const GridSpec& g = f.grid();
  detail::require_alpha(g, alpha);
  std::vector<unsigned char> in0(g.node_count(), 0);
  detail::for_each_member(g, b0, [&](std::size_t i) {
    in0[i] = 1;
    return true;
  });
  std::vector<Ball> cands{b0};
  const auto fb = family.balls();
  std::vector<unsigned char> keep(fb.size(), 0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(fb.size()); ++k)
    keep[static_cast<std::size_t>(k)] =
        detail::for_each_member(g, fb[static_cast<std::size_t>(k)], [&](std::size_t i) { return in0[i] != 0; }) ? 1 : 0;
  for (std::size_t k = 0; k < fb.size(); ++k)
    if (keep[k]) cands.push_back(fb[k]);
  const auto af = abs_values(f);
  auto v = fractional_scatter(g, af, cands, alpha);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!in0[i]) v[i] = 0.0;
  return finish(f.grid_ptr(), std::move(v));
}

SampledField sharp_maximal(const SampledField& f, const BallFamily& family) {
  const GridSpec& g = f.grid();
  const double cell = g.cell_volume();
  const auto vals = f.values();
  auto v = scatter_max(g, family.balls(), [&](const std::vector<std::size_t>& mem, std::vector<double>& out) {
    const double m = static_cast<double>(mem.size()) * cell;
    const double val = detail::oscillation_value(detail::oscillation_sum(vals, mem, cell, m), cell, m);
    for (auto i : mem) out[i] = std::max(out[i], val);
  });
  return finish(f.grid_ptr(), std::move(v));
}

SampledField maximal_commutator(const SampledField& b, const SampledField& f, const BallFamily& family,
                                double alpha) {
  const GridSpec& g = f.grid();
  require_same_grid(b.grid(), g, "maximal_commutator");
  detail::require_alpha(g, alpha);
  const double cell = g.cell_volume();
  const double expo = -1.0 + alpha / g.group().homogeneous_dim();
  const auto bv = b.values();
  const auto af = abs_values(f);
  auto v = scatter_max(g, family.balls(), [&](const std::vector<std::size_t>& mem, std::vector<double>& out) {
    // Members with f = 0 add exact zeros; dropping them keeps the sum bitwise.
    thread_local std::vector<double> sb, sf;
    sb.clear();
    sf.clear();
    for (auto i : mem)
      if (af[i] != 0.0) {
        sb.push_back(bv[i]);
        sf.push_back(af[i]);
      }
    const double scale = std::pow(static_cast<double>(mem.size()) * cell, expo);
    for (auto x : mem) {
      double s = 0.0;
      const double bx = bv[x];
      for (std::size_t j = 0; j < sb.size(); ++j) s += detail::commutator_term(bx, sb[j], sf[j]);
      out[x] = std::max(out[x], scale * (s * cell));
    }
  });
  return finish(f.grid_ptr(), std::move(v));
}

SampledField commutator_maximal(const SampledField& b, const SampledField& f, const BallFamily& family,
                                double alpha) {
  require_same_grid(b.grid(), f.grid(), "commutator_maximal");
  return b * fractional_maximal(f, family, alpha) - fractional_maximal(b * f, family, alpha);
}

SampledField commutator_sharp(const SampledField& b, const SampledField& f, const BallFamily& family) {
  require_same_grid(b.grid(), f.grid(), "commutator_sharp");
  return b * sharp_maximal(f, family) - sharp_maximal(b * f, family);
}

std::optional<OperatorKind> parse_operator(std::string_view name) {
  if (name == "maxal") return OperatorKind::maximal;
  if (name == "sharp") return OperatorKind::sharp;
  if (name == "maxcomm") return OperatorKind::maximal_commutator;
  if (name == "comm-max") return OperatorKind::commutator_maximal;
  if (name == "comm-sharp") return OperatorKind::commutator_sharp;
  return std::nullopt;
}

std::string_view operator_name(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::maximal: return "maxal";
    case OperatorKind::sharp: return "sharp";
    case OperatorKind::maximal_commutator: return "maxcomm";
    case OperatorKind::commutator_maximal: return "comm-max";
    case OperatorKind::commutator_sharp: return "comm-sharp";
  }
  return "?";
}

bool needs_symbol(OperatorKind kind) {
  return kind == OperatorKind::maximal_commutator || kind == OperatorKind::commutator_maximal ||
         kind == OperatorKind::commutator_sharp;
}

SampledField apply_operator(OperatorKind kind, Backend backend, const SampledField* b, const SampledField& f,
                            const BallFamily& family, double alpha) {
  if (needs_symbol(kind) && b == nullptr)
    throw std::invalid_argument(std::string(operator_name(kind)) + " needs a symbol field b");
  const bool fast = backend == Backend::fast;
  switch (kind) {
    case OperatorKind::maximal:
      return fast ? fractional_maximal(f, family, alpha) : reference::fractional_maximal(f, family, alpha);
    case OperatorKind::sharp:
      return fast ? sharp_maximal(f, family) : reference::sharp_maximal(f, family);
    case OperatorKind::maximal_commutator:
      return fast ? maximal_commutator(*b, f, family, alpha) : reference::maximal_commutator(*b, f, family, alpha);
    case OperatorKind::commutator_maximal:
      return fast ? commutator_maximal(*b, f, family, alpha) : reference::commutator_maximal(*b, f, family, alpha);
    case OperatorKind::commutator_sharp:
      return fast ? commutator_sharp(*b, f, family) : reference::commutator_sharp(*b, f, family);
  }
  throw std::logic_error("apply_operator: unknown kind");
}

BallFamily nested_family(const GridSpec& grid, const Ball& b0, const BallFamily& family) {
  std::vector<unsigned char> in0(grid.node_count(), 0);
  std::size_t n0 = 0;
  detail::for_each_member(grid, b0, [&](std::size_t i) {
    in0[i] = 1;
    ++n0;
    return true;
  });
  std::vector<Ball> kept{b0};
  std::vector<std::size_t> mem;
  for (const Ball& b : family.balls()) {
    mem.clear();
    detail::enumerate_members(grid, b, mem);
    std::size_t inside = 0;
    for (auto i : mem) inside += in0[i];
    if (inside == mem.size() || inside == 0 || inside == n0) kept.push_back(b);
  }
  kept.push_back(cover_ball(grid));
  return BallFamily::from_balls(std::move(kept));
}

}  // namespace maxlab
