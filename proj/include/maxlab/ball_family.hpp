#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "maxlab/grid.hpp"

namespace maxlab {

/// Parameters of a generated family: centers on a strided subgrid times a
/// geometric sequence of radii.
struct FamilyParams {
  int center_stride = 4;
  double r_min = 0.0;  // 0: two cells of the coarsest weight-1 axis
  double ratio = std::numbers::sqrt2;
  int count = 0;       // 0: grow until the radius exceeds the box diameter
  bool cover = false;  // append a ball holding every node
};

/// Finite candidate set over which every supremum is taken. Distinguished
/// balls are stored verbatim in addition to the generated ones.
class BallFamily {
 public:
  BallFamily() = default;

  static BallFamily generate(const GridSpec& grid, const FamilyParams& params,
                             std::vector<Ball> distinguished = {});
  static BallFamily from_balls(std::vector<Ball> balls);

  void add_distinguished(const Ball& ball);
  void add_cover_ball(const GridSpec& grid);

  std::span<const Ball> balls() const { return balls_; }
  std::span<const Ball> distinguished() const { return distinguished_; }
  std::size_t size() const { return balls_.size(); }
  bool empty() const { return balls_.empty(); }
  const FamilyParams& params() const { return params_; }
  const std::vector<double>& radii() const { return radii_; }

 private:
  std::vector<Ball> balls_;
  std::vector<Ball> distinguished_;
  std::vector<double> radii_;
  FamilyParams params_;
};

/// Smallest ball about the box center that holds every node (radius padded by 1e-9 relative).
Ball cover_ball(const GridSpec& grid);

/// Gauge diameter estimate of the box: twice the cover radius.
double box_diameter(const GridSpec& grid);

/// Two cells of the coarsest axis with dilation weight 1.
double default_min_radius(const GridSpec& grid);

}  // namespace maxlab
