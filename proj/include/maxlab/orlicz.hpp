#pragma once

#include "maxlab/grid.hpp"
#include "maxlab/young.hpp"

namespace maxlab {

struct NormResult {
  double value = 0.0;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool converged = true;
};

/// Luxemburg norm of f restricted to `region` (zero extension):
///   inf{lambda > 0 : sum_region Phi(|f|/lambda) * cell_volume <= 1}.
/// For an L^inf-type Phi this is the discrete sup of |f| on the region.
NormResult luxemburg_norm(const SampledField& f, const YoungFunction& phi, const RegionMask& region);

/// Weak Orlicz norm inf{lambda : sup_t Phi(t) m(f/lambda, t) <= 1}. The inner
/// sup runs over the breakpoints of the distribution function: with sorted
/// magnitudes u_1 < ... < u_k it equals max_j Phi(u_j/lambda) |{|f| >= u_j}|.
NormResult weak_norm(const SampledField& f, const YoungFunction& phi, const RegionMask& region);

/// The modular S(lambda) used by luxemburg_norm.
double orlicz_modular(const SampledField& f, const YoungFunction& phi, const RegionMask& region,
                      double lambda);
/// W(lambda) used by weak_norm.
double weak_modular(const SampledField& f, const YoungFunction& phi, const RegionMask& region,
                    double lambda);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = true;
  /// rhs - lhs, relative to max(|rhs|, tiny); negative when violated.
  double slack() const;
};

/// int_region |f g| <= 2 ||f||_{Phi} ||g||_{conj Phi}, accepted with 1e-6 relative slack.
InequalityCheck holder_check(const SampledField& f, const SampledField& g, const YoungFunction& phi,
                             const RegionMask& region);

/// int_B |f| <= 2 |B| Phi^{-1}(1/|B|) ||f||_{Phi, B} with |B| the mask measure.
/// Throws std::domain_error when the ball holds no node.
InequalityCheck mean_bound_check(const SampledField& f, const YoungFunction& phi, const Ball& ball);
InequalityCheck mean_bound_check(const SampledField& f, const YoungFunction& phi, const RegionMask& ball);

}  // namespace maxlab
