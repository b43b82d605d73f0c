#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace maxlab {

enum class GroupKind { euclidean, heisenberg1 };

/// A group element in exponential coordinates.
class GroupPoint {
 public:
  GroupPoint() = default;
  explicit GroupPoint(std::vector<double> coords);
  GroupPoint(std::initializer_list<double> coords) : coords_(coords) {}

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }
  const double* data() const { return coords_.data(); }

  friend bool operator==(const GroupPoint&, const GroupPoint&) = default;

 private:
  std::vector<double> coords_;
};

struct GroupCalibration {
  double c1 = 0.0;             // Haar volume of the unit ball
  double c0 = 1.0;             // quasi-triangle constant estimate
  int resolution = 0;          // cells per axis used for c1
  std::size_t c0_samples = 0;  // 0 when c0 is exact
};

/// Homogeneous group instance. Only Euclidean R^n and the first Heisenberg
/// group are provided; both use Lebesgue measure in exponential coordinates.
class GroupSpec {
 public:
  static GroupSpec euclidean(int n);
  static GroupSpec heisenberg1();

  GroupKind kind() const { return kind_; }
  int coord_dim() const { return static_cast<int>(weights_.size()); }
  int homogeneous_dim() const { return q_; }
  const std::vector<int>& dilation_weights() const { return weights_; }

  bool calibrated() const { return calibration_.has_value(); }
  const std::optional<GroupCalibration>& calibration() const { return calibration_; }
  /// Throws std::logic_error when uncalibrated.
  double c1() const;
  double c0() const;
  GroupSpec with_calibration(const GroupCalibration& cal) const;

  std::string name() const;
  bool same_group(const GroupSpec& other) const {
    return kind_ == other.kind_ && weights_.size() == other.weights_.size();
  }

 private:
  GroupSpec(GroupKind kind, std::vector<int> weights);

  GroupKind kind_;
  std::vector<int> weights_;
  int q_;
  std::optional<GroupCalibration> calibration_;
};

class Ball {
 public:
  Ball(GroupPoint center, double radius);

  const GroupPoint& center() const { return center_; }
  double radius() const { return radius_; }

  friend bool operator==(const Ball&, const Ball&) = default;

 private:
  GroupPoint center_;
  double radius_;
};

GroupPoint group_mul(const GroupPoint& g, const GroupPoint& h, const GroupSpec& spec);
GroupPoint group_inv(const GroupPoint& g, const GroupSpec& spec);
GroupPoint group_identity(const GroupSpec& spec);
GroupPoint dilate(const GroupPoint& g, double s, const GroupSpec& spec);

/// Homogeneous norm: Euclidean length on R^n, ((x^2+y^2)^2 + t^2)^{1/4} on H^1.
double hom_norm(const GroupPoint& g, const GroupSpec& spec);

/// g in B(center, r) iff rho(g^{-1} center) < r.
bool ball_contains(const Ball& ball, const GroupPoint& g, const GroupSpec& spec);

/// c1 * r^Q; needs a calibrated spec.
double ball_volume(const Ball& ball, const GroupSpec& spec);

struct CalibrationOptions {
  int resolution = 0;           // cells per axis; 0 picks a dimension default
  std::size_t c0_samples = 20000;
  std::uint64_t seed = 0x5eed;
};

/// c1 by midpoint quadrature of {rho < 1} over [-1,1]^d; c0 = 1 on R^n, and
/// on H^1 the supremum of rho(gh)/(rho(g)+rho(h)) over sampled pairs followed
/// by a pattern-search refinement of the best candidates.
GroupSpec calibrate_constants(const GroupSpec& spec, const CalibrationOptions& opts = {});

namespace detail {

inline double gauge(GroupKind kind, int dim, const double* g) {
  if (kind == GroupKind::heisenberg1) {
    const double r2 = g[0] * g[0] + g[1] * g[1];
    return std::sqrt(std::sqrt(r2 * r2 + g[2] * g[2]));
  }
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += g[i] * g[i];
  return std::sqrt(s);
}

/// rho(g^{-1} h), evaluated with exactly the arithmetic of
/// hom_norm(group_mul(group_inv(g), h)).
inline double relative_gauge(GroupKind kind, int dim, const double* g, const double* h) {
  if (kind == GroupKind::heisenberg1) {
    const double p0 = -g[0], p1 = -g[1], p2 = -g[2];
    const double d[3] = {p0 + h[0], p1 + h[1], p2 + h[2] + 0.5 * (p0 * h[1] - p1 * h[0])};
    return gauge(kind, 3, d);
  }
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = -g[i] + h[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline bool in_ball(GroupKind kind, int dim, const double* node, const double* center,
                    double radius) {
  return relative_gauge(kind, dim, node, center) < radius;
}

}  // namespace detail

}  // namespace maxlab
