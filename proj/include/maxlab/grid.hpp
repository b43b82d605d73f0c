#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "maxlab/group.hpp"

namespace maxlab {

/// Rectangular node grid over a coordinate box. Nodes are stored in
/// lexicographic order with axis 0 slowest; every reduction in the library
/// walks nodes in this order.
class GridSpec {
 public:
  GridSpec(GroupSpec group, std::vector<double> lo, std::vector<double> hi, std::vector<int> points);

  const GroupSpec& group() const { return group_; }
  int dim() const { return static_cast<int>(points_.size()); }
  std::size_t node_count() const { return node_count_; }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  const std::vector<int>& points() const { return points_; }
  double spacing(int axis) const { return spacing_[static_cast<std::size_t>(axis)]; }
  /// Product of spacings; the Haar weight of one node.
  double cell_volume() const { return cell_volume_; }
  /// Discrete measure of the whole box: node_count * cell_volume.
  double box_measure() const { return static_cast<double>(node_count_) * cell_volume_; }
  /// Continuous volume prod(hi - lo).
  double box_volume() const;

  std::span<const double> axis_coords(int axis) const { return axis_[static_cast<std::size_t>(axis)]; }
  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }
  int axis_index(std::size_t node, int axis) const {
    return static_cast<int>((node / strides_[static_cast<std::size_t>(axis)]) %
                            static_cast<std::size_t>(points_[static_cast<std::size_t>(axis)]));
  }
  void node_coords(std::size_t node, double* out) const;
  GroupPoint node(std::size_t index) const;
  std::string location(std::size_t node) const;
  GroupPoint box_center() const;

  /// Same group, box and resolution (a group calibration is not compared).
  bool same_layout(const GridSpec& other) const;
  /// Grid with (points - 1) * factor + 1 nodes per axis, same box.
  GridSpec refined(double factor) const;

  /// One-line JSON descriptor of this grid.
  std::string descriptor() const;

 private:
  GroupSpec group_;
  std::vector<double> lo_, hi_;
  std::vector<int> points_;
  std::vector<double> spacing_;
  std::vector<std::vector<double>> axis_;
  std::vector<std::size_t> strides_;
  std::size_t node_count_ = 0;
  double cell_volume_ = 0.0;
};

using GridPtr = std::shared_ptr<const GridSpec>;

GridPtr make_grid(GroupSpec group, std::vector<double> lo, std::vector<double> hi,
                  std::vector<int> points);

/// Finite scalar field sampled at grid nodes.
class SampledField {
 public:
  SampledField(GridPtr grid, std::vector<double> values);
  static SampledField constant(GridPtr grid, double c);

  const GridSpec& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

class RegionMask {
 public:
  RegionMask(GridPtr grid, std::vector<unsigned char> member);
  static RegionMask whole(GridPtr grid);

  const GridSpec& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  bool contains(std::size_t node) const { return member_[node] != 0; }
  std::span<const unsigned char> members() const { return member_; }
  std::size_t count() const { return count_; }
  double measure() const { return measure_; }
  bool empty() const { return count_ == 0; }

 private:
  GridPtr grid_;
  std::vector<unsigned char> member_;
  std::size_t count_ = 0;
  double measure_ = 0.0;
};

using PointFunction = std::function<double(std::span<const double>)>;

/// values[i] = fn(node_i); throws std::domain_error naming the node if fn is
/// not finite there.
SampledField sample(const PointFunction& fn, const GridPtr& grid);

RegionMask mask_from_ball(const Ball& ball, const GridPtr& grid);
SampledField indicator(const RegionMask& mask);

/// Riemann sum over members in lexicographic node order.
double integrate(const SampledField& f, const RegionMask& region);
/// Throws std::domain_error on an empty region.
double average_over(const SampledField& f, const RegionMask& region);
/// |{x in region : |f(x)| > t}|.
double distribution_function(const SampledField& f, const RegionMask& region, double t);
double max_abs_over(const SampledField& f, const RegionMask& region);

struct OpAdd {};
struct OpSub {};
struct OpMul {};
struct OpAbs {};
struct OpScale {
  double c;
};
struct OpPosPart {};
struct OpNegPart {};
using CombineOp = std::variant<OpAdd, OpSub, OpMul, OpAbs, OpScale, OpPosPart, OpNegPart>;

/// Nodewise combination. Unary variants ignore g apart from the grid check.
SampledField combine(const SampledField& f, const SampledField& g, const CombineOp& op);

SampledField operator+(const SampledField& f, const SampledField& g);
SampledField operator-(const SampledField& f, const SampledField& g);
SampledField operator*(const SampledField& f, const SampledField& g);
SampledField abs(const SampledField& f);
SampledField scale(const SampledField& f, double c);
SampledField add_constant(const SampledField& f, double c);
SampledField positive_part(const SampledField& f);
/// b^-(x) = |b(x)| where b < 0, else 0.
SampledField negative_part(const SampledField& f);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace maxlab
