#pragma once

#include <limits>
#include <string>
#include <vector>

#include "maxlab/ball_family.hpp"
#include "maxlab/config.hpp"
#include "maxlab/grid.hpp"

namespace maxlab {

struct CheckResult {
  std::string name;
  std::string anchor;  // the claim under test, in words
  bool passed = false;
  double slack = 0.0;  // worst margin; negative beyond tolerance means failure
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  std::string grid;
  std::uint64_t seed = 0;

  bool passed() const;
  std::vector<std::string> failed_names() const;
  std::string to_json() const;
};

/// Runs every property suite on the configured group and grid.
VerifyReport run_verify(const RunConfig& cfg);

/// Min over nodes of (rhs - lhs) and the count of nodes below -tol.
struct InequalityTally {
  std::size_t violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  void add(double lhs, double rhs, double tol);
};

struct PointwiseSuite {
  InequalityTally nonneg_commutator;   // |[|b|,M] f| <= M_{|b|} f
  InequalityTally signed_commutator;   // |[b,M] f| <= M_b f + 2 b^- M f
  InequalityTally mean_oscillation;    // |b - b_B0| <= M_b chi_B0 on B0
  InequalityTally lipschitz_domination;  // M_b f <= C M_beta f
  double lipschitz_constant = 0.0;
  std::size_t total_violations() const;
};

/// The four pointwise inequalities for one (b, f) pair. `family` must hold b0.
PointwiseSuite pointwise_suite(const SampledField& b, const SampledField& f, const Ball& b0, const BallFamily& family,
                               double beta, double tol);

/// Family with about 32 centers per axis in 1-D, 8 in 2-D and 3 in 3-D, radius
/// ratio 2 and a cover ball; sized for the quadratic maximal-commutator kernel.
FamilyParams lean_family(const GridSpec& grid);

}  // namespace maxlab
