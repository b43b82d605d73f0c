#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace maxlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Convex, nondecreasing, left-continuous Phi : [0, inf) -> [0, inf] with Phi(0) = 0.
///
/// Families:
///   Power      Phi(t) = coef * t^p, p >= 1.
///   LInfinity  Phi(t) = 0 on [0, threshold], +inf beyond (the L^inf gauge).
///   Tabulated  piecewise-linear through (t_i, v_i), power-law tails with
///              declared exponents; an upper exponent of +inf means Phi = +inf
///              past the last breakpoint.
class YoungFunction {
 public:
  struct Power {
    double p = 1.0;
    double coef = 1.0;
  };
  struct LInfinity {
    double threshold = 1.0;
  };
  struct Tabulated {
    std::vector<double> t;
    std::vector<double> v;
    double lower_exponent = 1.0;  // unused when t.front() == 0
    double upper_exponent = 1.0;
  };
  using Family = std::variant<Power, LInfinity, Tabulated>;

  static YoungFunction power(double p, double coef = 1.0, std::string label = {});
  static YoungFunction linfinity(double threshold = 1.0, std::string label = {});
  /// Validates monotonicity and convexity of the table (relative slack 1e-9);
  /// throws std::invalid_argument on failure.
  static YoungFunction tabulated(std::vector<double> t, std::vector<double> v,
                                 double lower_exponent, double upper_exponent,
                                 std::string label = {});

  /// Phi(t); throws for negative t.
  double operator()(double t) const { return eval(t); }
  double eval(double t) const;

  /// Generalized inverse inf{r >= 0 : Phi(r) > s}; s may be +inf.
  double inverse(double s) const;

  /// Finite and positive on (0, inf).
  bool in_class_y() const;

  const Family& family() const { return family_; }
  const std::string& label() const { return label_; }
  bool is_linfinity() const { return std::holds_alternative<LInfinity>(family_); }
  bool is_power() const { return std::holds_alternative<Power>(family_); }

 private:
  YoungFunction(Family f, std::string label) : family_(std::move(f)), label_(std::move(label)) {}

  Family family_;
  std::string label_;
};

/// Complementary function sup{rs - Phi(s)}. Power and LInfinity families are
/// closed under conjugation and use the closed form; Tabulated goes through
/// numeric_conjugate.
YoungFunction conjugate(const YoungFunction& phi);

struct ConjugateGrid {
  double r_min = 1e-9;
  double r_max = 1e9;
  int per_decade = 40;
};

/// Tabulated conjugate: for each grid point r the concave map s -> rs - Phi(s)
/// is bracketed on a geometric ladder and refined by golden-section search.
/// A finite-domain edge (where the conjugate jumps to +inf) is located by
/// bisection and becomes the last breakpoint.
YoungFunction numeric_conjugate(const YoungFunction& phi, const ConjugateGrid& grid = {});

/// Single evaluation of sup_{s >= 0} (r s - Phi(s)) by the same search.
double conjugate_value(const YoungFunction& phi, double r);

std::vector<double> log_grid(double lo, double hi, std::size_t count);

enum class ConjugateMode { closed_form, numeric };

struct YoungPairReport {
  bool ok = true;
  double min_ratio = kInf;
  double max_ratio = 0.0;
  std::optional<double> offending_r;  // first r violating the bounds
};

/// Checks r <= Phi^{-1}(r) * conj^{-1}(r) <= 2r at each grid point with
/// relative slack 1e-6; ratios are reported divided by r.
YoungPairReport check_young_pair(const YoungFunction& phi, std::span<const double> r_grid,
                                 ConjugateMode mode = ConjugateMode::closed_form);

struct GrowthReport {
  std::optional<double> delta2_constant;
  std::optional<double> nabla2_constant;
  double r_min = 0.0;
  double r_max = 0.0;
  int samples = 0;
};

/// max Phi(2r)/Phi(r) over log-spaced r in [r_min, r_max]; absent when some
/// ratio is infinite. The range must span at least six decades.
GrowthReport check_delta2(const YoungFunction& phi, double r_min, double r_max, int samples);

/// Smallest C in c_grid with Phi(r) <= Phi(C r) / (2C) at every sample.
GrowthReport check_nabla2(const YoungFunction& phi, double r_min, double r_max, int samples,
                          std::span<const double> c_grid);

/// Log-log least-squares slope of the breakpoint table of a Tabulated function
/// over points with t in [t_lo, t_hi] and positive values.
double tabulated_loglog_slope(const YoungFunction& phi, double t_lo, double t_hi);

}  // namespace maxlab
