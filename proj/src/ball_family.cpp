#include "maxlab/ball_family.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxlab {

Ball cover_ball(const GridSpec& grid) {
  const GroupPoint c = grid.box_center();
  const GroupSpec& g = grid.group();
  double r = 0.0;
  std::vector<double> x(static_cast<std::size_t>(grid.dim()));
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    grid.node_coords(i, x.data());
    r = std::max(r, detail::relative_gauge(g.kind(), g.coord_dim(), x.data(), c.data()));
  }
  return Ball(c, r * (1.0 + 1e-9) + 1e-12);
}

double box_diameter(const GridSpec& grid) { return 2.0 * cover_ball(grid).radius(); }

double default_min_radius(const GridSpec& grid) {
  double h = 0.0;
  const auto& w = grid.group().dilation_weights();
  for (int k = 0; k < grid.dim(); ++k)
    if (w[static_cast<std::size_t>(k)] == 1) h = std::max(h, grid.spacing(k));
  return 2.0 * h;
}

BallFamily BallFamily::generate(const GridSpec& grid, const FamilyParams& params,
                                std::vector<Ball> distinguished) {
  if (params.center_stride < 1) throw std::invalid_argument("BallFamily: center stride must be >= 1");
  if (!(params.ratio > 1.0)) throw std::invalid_argument("BallFamily: radius ratio must exceed 1");
  if (params.count < 0) throw std::invalid_argument("BallFamily: negative radius count");
  BallFamily fam;
  fam.params_ = params;
  const double r0 = params.r_min > 0.0 ? params.r_min : default_min_radius(grid);
  if (params.count > 0) {
    for (int k = 0; k < params.count; ++k) fam.radii_.push_back(r0 * std::pow(params.ratio, k));
  } else {
    const double rmax = box_diameter(grid);
    for (double r = r0; ; r *= params.ratio) {
      fam.radii_.push_back(r);
      if (r > rmax) break;
    }
  }
  const int d = grid.dim();
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> c(static_cast<std::size_t>(d));
  while (true) {
    for (int k = 0; k < d; ++k) c[static_cast<std::size_t>(k)] = grid.axis_coords(k)[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
    for (double r : fam.radii_) fam.balls_.emplace_back(GroupPoint(c), r);
    int k = d - 1;
    while (k >= 0) {
      auto& i = idx[static_cast<std::size_t>(k)];
      i += params.center_stride;
      if (i < grid.points()[static_cast<std::size_t>(k)]) break;
      i = 0;
      --k;
    }
    if (k < 0) break;
  }
  for (auto& b : distinguished) fam.add_distinguished(b);
  if (params.cover) fam.add_cover_ball(grid);
  return fam;
}

BallFamily BallFamily::from_balls(std::vector<Ball> balls) {
  BallFamily fam;
  fam.balls_ = std::move(balls);
  return fam;
}

void BallFamily::add_distinguished(const Ball& ball) {
  distinguished_.push_back(ball);
  balls_.push_back(ball);
}

void BallFamily::add_cover_ball(const GridSpec& grid) { balls_.push_back(cover_ball(grid)); }

}  // namespace maxlab
