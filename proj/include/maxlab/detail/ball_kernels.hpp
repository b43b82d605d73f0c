#pragma once

// Primitives shared by the OpenMP kernels and the serial reference. Both
// paths must reach identical bits, so every per-ball formula lives here and
// member sums always run in lexicographic node order.

#include <cmath>
#include <cstddef>
#include <vector>

#include "maxlab/grid.hpp"

namespace maxlab::detail {

inline double fractional_value(double measure, double exponent, double abs_sum, double cell) {
  return std::pow(measure, exponent) * (abs_sum * cell);
}

inline double ball_mean(double sum, double cell, double measure) { return (sum * cell) / measure; }

inline double oscillation_value(double osc_sum, double cell, double measure) {
  return (osc_sum * cell) / measure;
}

/// sum_j |v_j - mean| over the members, taken on deviations from the first
/// member: a constant gives exactly 0 and b + c matches b whenever the
/// deviations are exact.
template <class Values>
double oscillation_sum(const Values& v, const std::vector<std::size_t>& mem, double cell, double measure) {
  if (mem.empty()) return 0.0;
  const double pivot = v[mem.front()];
  double sum = 0.0;
  for (std::size_t i : mem) sum += v[i] - pivot;
  const double mean = ball_mean(sum, cell, measure);
  double osc = 0.0;
  for (std::size_t i : mem) osc += std::abs((v[i] - pivot) - mean);
  return osc;
}

inline double commutator_term(double bx, double by, double abs_f) { return std::abs(bx - by) * abs_f; }

inline bool node_in_ball(const GridSpec& g, const double* node, const Ball& ball) {
  return in_ball(g.group().kind(), g.group().coord_dim(), node, ball.center().data(), ball.radius());
}

/// Brute force: every node, lexicographic order, exact test.
template <class Fn>
void scan_members(const GridSpec& g, const Ball& ball, Fn&& fn) {
  double x[3] = {};
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    g.node_coords(i, x);
    if (node_in_ball(g, x, ball)) fn(i);
  }
}

/// Pruned enumeration in lexicographic order. Candidate ranges are widened
/// by one node and a 1e-9 radius pad; the exact test decides membership.
/// fn returns false to stop early; the function returns false if stopped.
template <class Fn>
bool for_each_member(const GridSpec& g, const Ball& ball, Fn&& fn);

void enumerate_members(const GridSpec& g, const Ball& ball, std::vector<std::size_t>& out);

// --- implementation -------------------------------------------------------

inline bool axis_range(const GridSpec& g, int axis, double lo_c, double hi_c, int& i0, int& i1) {
  const double h = g.spacing(axis);
  const double o = g.lo()[static_cast<std::size_t>(axis)];
  const int n = g.points()[static_cast<std::size_t>(axis)];
  const double a = std::ceil((lo_c - o) / h) - 1.0;
  const double b = std::floor((hi_c - o) / h) + 1.0;
  if (!(a <= b)) return false;
  i0 = a < 0.0 ? 0 : (a > n - 1 ? n : static_cast<int>(a));
  i1 = b > n - 1 ? n - 1 : (b < 0.0 ? -1 : static_cast<int>(b));
  return i0 <= i1;
}

template <class Fn>
bool for_each_member(const GridSpec& g, const Ball& ball, Fn&& fn) {
  const GroupSpec& grp = g.group();
  const int d = g.dim();
  const double* c = ball.center().data();
  const double R = ball.radius() * (1.0 + 1e-9);
  const auto ax0 = g.axis_coords(0);
  double x[3] = {};
  int a0, a1;
  if (!axis_range(g, 0, c[0] - R, c[0] + R, a0, a1)) return true;

  if (grp.kind() == GroupKind::heisenberg1) {
    const auto ax1 = g.axis_coords(1);
    const auto ax2 = g.axis_coords(2);
    const double R4 = R * R * R * R;
    for (int i = a0; i <= a1; ++i) {
      x[0] = ax0[static_cast<std::size_t>(i)];
      const double dx = x[0] - c[0];
      const double remy = R * R - dx * dx;
      if (remy < 0.0) continue;
      const double wy = std::sqrt(remy);
      int b0, b1;
      if (!axis_range(g, 1, c[1] - wy, c[1] + wy, b0, b1)) continue;
      for (int j = b0; j <= b1; ++j) {
        x[1] = ax1[static_cast<std::size_t>(j)];
        const double dy = x[1] - c[1];
        const double rxy = dx * dx + dy * dy;
        const double remt = R4 - rxy * rxy;
        if (remt < 0.0) continue;
        const double wt = std::sqrt(remt);
        const double tc = c[2] + 0.5 * (x[1] * c[0] - x[0] * c[1]);
        int t0, t1;
        if (!axis_range(g, 2, tc - wt, tc + wt, t0, t1)) continue;
        const std::size_t base = static_cast<std::size_t>(i) * g.stride(0) + static_cast<std::size_t>(j) * g.stride(1);
        for (int k = t0; k <= t1; ++k) {
          x[2] = ax2[static_cast<std::size_t>(k)];
          if (node_in_ball(g, x, ball) && !fn(base + static_cast<std::size_t>(k))) return false;
        }
      }
    }
    return true;
  }

  if (d == 1) {
    for (int i = a0; i <= a1; ++i) {
      x[0] = ax0[static_cast<std::size_t>(i)];
      if (node_in_ball(g, x, ball) && !fn(static_cast<std::size_t>(i))) return false;
    }
    return true;
  }
  const auto ax1 = g.axis_coords(1);
  for (int i = a0; i <= a1; ++i) {
    x[0] = ax0[static_cast<std::size_t>(i)];
    const double d0 = x[0] - c[0];
    const double rem1 = R * R - d0 * d0;
    if (rem1 < 0.0) continue;
    const double w1 = std::sqrt(rem1);
    int b0, b1;
    if (!axis_range(g, 1, c[1] - w1, c[1] + w1, b0, b1)) continue;
    for (int j = b0; j <= b1; ++j) {
      x[1] = ax1[static_cast<std::size_t>(j)];
      const std::size_t base = static_cast<std::size_t>(i) * g.stride(0) + static_cast<std::size_t>(j) * g.stride(1);
      if (d == 2) {
        if (node_in_ball(g, x, ball) && !fn(base)) return false;
        continue;
      }
      const double d1 = x[1] - c[1];
      const double rem2 = rem1 - d1 * d1;
      if (rem2 < 0.0) continue;
      const double w2 = std::sqrt(rem2);
      int k0, k1;
      if (!axis_range(g, 2, c[2] - w2, c[2] + w2, k0, k1)) continue;
      const auto ax2 = g.axis_coords(2);
      for (int k = k0; k <= k1; ++k) {
        x[2] = ax2[static_cast<std::size_t>(k)];
        if (node_in_ball(g, x, ball) && !fn(base + static_cast<std::size_t>(k))) return false;
      }
    }
  }
  return true;
}

inline void enumerate_members(const GridSpec& g, const Ball& ball, std::vector<std::size_t>& out) {
  for_each_member(g, ball, [&](std::size_t i) {
    out.push_back(i);
    return true;
  });
}

}  // namespace maxlab::detail
