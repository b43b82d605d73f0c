#include "maxlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace maxlab {

GridSpec::GridSpec(GroupSpec group, std::vector<double> lo, std::vector<double> hi,
                   std::vector<int> points)
    : group_(std::move(group)), lo_(std::move(lo)), hi_(std::move(hi)), points_(std::move(points)) {
  const auto d = static_cast<std::size_t>(group_.coord_dim());
  if (lo_.size() != d || hi_.size() != d || points_.size() != d)
    throw std::invalid_argument("GridSpec: box dimensions do not match " + group_.name());
  if (d > 3) throw std::invalid_argument("GridSpec: grids are limited to three coordinates");
  spacing_.resize(d);
  axis_.resize(d);
  strides_.resize(d);
  node_count_ = 1;
  cell_volume_ = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    if (!std::isfinite(lo_[k]) || !std::isfinite(hi_[k]) || !(lo_[k] < hi_[k]))
      throw std::invalid_argument("GridSpec: need lo < hi on every axis");
    if (points_[k] < 3) throw std::invalid_argument("GridSpec: need at least 3 points per axis");
    spacing_[k] = (hi_[k] - lo_[k]) / (points_[k] - 1);
    axis_[k].resize(static_cast<std::size_t>(points_[k]));
    for (int i = 0; i < points_[k]; ++i) axis_[k][static_cast<std::size_t>(i)] = lo_[k] + spacing_[k] * i;
    axis_[k].back() = hi_[k];
    node_count_ *= static_cast<std::size_t>(points_[k]);
    cell_volume_ *= spacing_[k];
  }
  std::size_t s = 1;
  for (std::size_t k = d; k-- > 0;) {
    strides_[k] = s;
    s *= static_cast<std::size_t>(points_[k]);
  }
}

double GridSpec::box_volume() const {
  double v = 1.0;
  for (std::size_t k = 0; k < lo_.size(); ++k) v *= hi_[k] - lo_[k];
  return v;
}

void GridSpec::node_coords(std::size_t node, double* out) const {
  for (int k = 0; k < dim(); ++k) out[k] = axis_[static_cast<std::size_t>(k)][static_cast<std::size_t>(axis_index(node, k))];
}

GroupPoint GridSpec::node(std::size_t index) const {
  std::vector<double> c(static_cast<std::size_t>(dim()));
  node_coords(index, c.data());
  return GroupPoint(std::move(c));
}

std::string GridSpec::location(std::size_t node) const {
  std::ostringstream os;
  os << "node " << node << " (";
  for (int k = 0; k < dim(); ++k) {
    if (k) os << ", ";
    os << axis_[static_cast<std::size_t>(k)][static_cast<std::size_t>(axis_index(node, k))];
  }
  os << ")";
  return os.str();
}

GroupPoint GridSpec::box_center() const {
  std::vector<double> c(lo_.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = 0.5 * (lo_[k] + hi_[k]);
  return GroupPoint(std::move(c));
}

bool GridSpec::same_layout(const GridSpec& other) const {
  return group_.same_group(other.group_) && lo_ == other.lo_ && hi_ == other.hi_ &&
         points_ == other.points_;
}

GridSpec GridSpec::refined(double factor) const {
  std::vector<int> pts(points_.size());
  for (std::size_t k = 0; k < pts.size(); ++k)
    pts[k] = std::max(3, static_cast<int>(std::lround((points_[k] - 1) * factor)) + 1);
  return GridSpec(group_, lo_, hi_, std::move(pts));
}

std::string GridSpec::descriptor() const {
  nlohmann::json j;
  j["group"] = group_.kind() == GroupKind::heisenberg1 ? "heisenberg1" : "euclidean";
  j["n"] = group_.coord_dim();
  j["lo"] = lo_;
  j["hi"] = hi_;
  j["points"] = points_;
  return j.dump();
}

GridPtr make_grid(GroupSpec group, std::vector<double> lo, std::vector<double> hi,
                  std::vector<int> points) {
  return std::make_shared<const GridSpec>(std::move(group), std::move(lo), std::move(hi),
                                          std::move(points));
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (&a != &b && !a.same_layout(b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

SampledField::SampledField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("SampledField: null grid");
  if (values_.size() != grid_->node_count())
    throw std::invalid_argument("SampledField: value count does not match node count");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      throw std::domain_error("SampledField: non-finite value at " + grid_->location(i));
  }
}

SampledField SampledField::constant(GridPtr grid, double c) {
  const std::size_t n = grid->node_count();
  return SampledField(std::move(grid), std::vector<double>(n, c));
}

RegionMask::RegionMask(GridPtr grid, std::vector<unsigned char> member)
    : grid_(std::move(grid)), member_(std::move(member)) {
  if (!grid_) throw std::invalid_argument("RegionMask: null grid");
  if (member_.size() != grid_->node_count())
    throw std::invalid_argument("RegionMask: member count does not match node count");
  count_ = static_cast<std::size_t>(std::count_if(member_.begin(), member_.end(),
                                                  [](unsigned char c) { return c != 0; }));
  measure_ = static_cast<double>(count_) * grid_->cell_volume();
}

RegionMask RegionMask::whole(GridPtr grid) {
  const std::size_t n = grid->node_count();
  return RegionMask(std::move(grid), std::vector<unsigned char>(n, 1));
}

SampledField sample(const PointFunction& fn, const GridPtr& grid) {
  std::vector<double> values(grid->node_count());
  std::vector<double> x(static_cast<std::size_t>(grid->dim()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    grid->node_coords(i, x.data());
    const double v = fn(x);
    if (!std::isfinite(v)) throw std::domain_error("sample: non-finite value at " + grid->location(i));
    values[i] = v;
  }
  return SampledField(grid, std::move(values));
}

RegionMask mask_from_ball(const Ball& ball, const GridPtr& grid) {
  const GroupSpec& g = grid->group();
  if (static_cast<int>(ball.center().dim()) != g.coord_dim())
    throw std::invalid_argument("mask_from_ball: ball dimension mismatch");
  std::vector<unsigned char> member(grid->node_count());
  std::vector<double> x(static_cast<std::size_t>(grid->dim()));
  for (std::size_t i = 0; i < member.size(); ++i) {
    grid->node_coords(i, x.data());
    member[i] = detail::in_ball(g.kind(), g.coord_dim(), x.data(), ball.center().data(), ball.radius());
  }
  return RegionMask(grid, std::move(member));
}

SampledField indicator(const RegionMask& mask) {
  std::vector<double> v(mask.grid().node_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = mask.contains(i) ? 1.0 : 0.0;
  return SampledField(mask.grid_ptr(), std::move(v));
}

double integrate(const SampledField& f, const RegionMask& region) {
  require_same_grid(f.grid(), region.grid(), "integrate");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (region.contains(i)) s += f[i];
  return s * f.grid().cell_volume();
}

double average_over(const SampledField& f, const RegionMask& region) {
  if (region.empty()) throw std::domain_error("average_over: zero-measure region");
  return integrate(f, region) / region.measure();
}

double distribution_function(const SampledField& f, const RegionMask& region, double t) {
  require_same_grid(f.grid(), region.grid(), "distribution_function");
  if (!(t >= 0.0)) throw std::invalid_argument("distribution_function: t must be >= 0");
  std::size_t n = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (region.contains(i) && std::abs(f[i]) > t) ++n;
  return static_cast<double>(n) * f.grid().cell_volume();
}

double max_abs_over(const SampledField& f, const RegionMask& region) {
  require_same_grid(f.grid(), region.grid(), "max_abs_over");
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (region.contains(i)) m = std::max(m, std::abs(f[i]));
  return m;
}

namespace {

template <class Fn>
SampledField map_binary(const SampledField& f, const SampledField& g, Fn fn) {
  require_same_grid(f.grid(), g.grid(), "combine");
  std::vector<double> out(f.size());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(f[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(i)]);
  return SampledField(f.grid_ptr(), std::move(out));
}

template <class Fn>
SampledField map_unary(const SampledField& f, Fn fn) {
  std::vector<double> out(f.size());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(f[static_cast<std::size_t>(i)]);
  return SampledField(f.grid_ptr(), std::move(out));
}

double neg_part(double b) { return b < 0.0 ? -b : 0.0; }

}  // namespace

SampledField combine(const SampledField& f, const SampledField& g, const CombineOp& op) {
  require_same_grid(f.grid(), g.grid(), "combine");
  if (std::holds_alternative<OpAdd>(op)) return f + g;
  if (std::holds_alternative<OpSub>(op)) return f - g;
  if (std::holds_alternative<OpMul>(op)) return f * g;
  if (std::holds_alternative<OpAbs>(op)) return abs(f);
  if (const auto* s = std::get_if<OpScale>(&op)) return scale(f, s->c);
  if (std::holds_alternative<OpPosPart>(op)) return positive_part(f);
  return negative_part(f);
}

SampledField operator+(const SampledField& f, const SampledField& g) {
  return map_binary(f, g, [](double a, double b) { return a + b; });
}
SampledField operator-(const SampledField& f, const SampledField& g) {
  return map_binary(f, g, [](double a, double b) { return a - b; });
}
SampledField operator*(const SampledField& f, const SampledField& g) {
  return map_binary(f, g, [](double a, double b) { return a * b; });
}
SampledField abs(const SampledField& f) {
  return map_unary(f, [](double a) { return std::abs(a); });
}
SampledField scale(const SampledField& f, double c) {
  return map_unary(f, [c](double a) { return c * a; });
}
SampledField add_constant(const SampledField& f, double c) {
  return map_unary(f, [c](double a) { return a + c; });
}
SampledField positive_part(const SampledField& f) {
  // b+ = |b| - b-
  return map_unary(f, [](double a) { return std::abs(a) - neg_part(a); });
}
SampledField negative_part(const SampledField& f) { return map_unary(f, neg_part); }

}  // namespace maxlab
