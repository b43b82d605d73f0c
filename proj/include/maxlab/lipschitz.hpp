#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxlab/ball_family.hpp"
#include "maxlab/grid.hpp"
#include "maxlab/maximal.hpp"
#include "maxlab/young.hpp"

namespace maxlab {

struct LipEstimate {
  double beta = 0.0;
  /// Sup of |b(x) - b(y)| / rho(y^{-1}x)^beta over sampled node pairs; a lower bound.
  double pair_norm = 0.0;
  /// Sup over the family of |B|^{-1-beta/Q} int_B |b - b_B|.
  double ball_norm = 0.0;
  std::size_t pairs = 0;
  /// pair_norm / ball_norm; absent when ball_norm == 0.
  std::optional<double> ratio() const;
};

/// pair_budget >= 1000 uniformly drawn node pairs; coincident pairs are skipped.
LipEstimate lipschitz_estimate(const SampledField& b, double beta, const BallFamily& family,
                               std::size_t pair_budget, std::uint64_t seed);

/// Exact discrete seminorm over all node pairs. Quadratic in the node count.
double lipschitz_seminorm(const SampledField& b, double beta);

/// |B|^{-1-beta/Q} int_B |b - b_B| with |B| the mask measure; 0 for an empty mask.
double ball_lipschitz(const SampledField& b, const Ball& ball, double beta);

/// Constant C with M_b f <= C M_beta f nodewise on `family`:
///   C = L (2 c0)^beta max_B (r_B^Q / |B|)^{beta/Q},
/// L the discrete seminorm of b and |B| the mask measure. Needs a calibrated group.
double pointwise_lipschitz_constant(const SampledField& b, double beta, const BallFamily& family,
                                    std::optional<double> seminorm = std::nullopt);

/// Raised when t -> Phi^{-1}(t) t^{-beta/Q} fails to increase strictly.
class PsiConstructionError : public std::invalid_argument {
 public:
  PsiConstructionError(double t_lo, double t_hi);
  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }

 private:
  double t_lo_, t_hi_;
};

struct PsiOptions {
  double t_min = 1e-12;
  double t_max = 1e12;
  int per_decade = 40;
};

/// Tabulated Psi with Psi^{-1}(t) = Phi^{-1}(t) t^{-beta/Q} at log-spaced t;
/// tails follow the log-secants of the end intervals.
YoungFunction psi_from_phi(const YoungFunction& phi, double beta, double q, const PsiOptions& opts = {});

struct BallFunctionals {
  double measure = 0.0;
  double f1 = 0.0;  // |B|^{-beta/Q} Psi^{-1}(1/|B|) ||b - M_B b||_{Psi,B}
  double f2 = 0.0;  // |B|^{-1-beta/Q} ||b - M_B b||_{L1(B)}
  double f3 = 0.0;  // as f1 with 2 M#(b chi_B) in place of M_B b
  double f4 = 0.0;  // as f2 with 2 M#(b chi_B)
  double lip_ball = 0.0;
};

/// All four functionals and the ball Lipschitz quotient for one ball. The
/// ball should be distinguished in `family`. Throws std::domain_error for an
/// empty mask.
BallFunctionals ball_functionals(const SampledField& b, const Ball& ball, const YoungFunction& psi, double beta,
                                 const BallFamily& family);

double functional_f1(const SampledField& b, const Ball& ball, const YoungFunction& psi, double beta,
                     const BallFamily& family);
double functional_f2(const SampledField& b, const Ball& ball, double beta, const BallFamily& family);
double functional_f3(const SampledField& b, const Ball& ball, const YoungFunction& psi, double beta,
                     const BallFamily& family);
double functional_f4(const SampledField& b, const Ball& ball, double beta, const BallFamily& family);

struct NamedField {
  std::string id;
  SampledField field;
};

struct RatioRow {
  std::string field_id;
  double target_norm = 0.0;
  double source_norm = 0.0;
  double ratio = 0.0;
};

struct RatioTable {
  OperatorKind op = OperatorKind::maximal;
  bool weak = false;
  std::vector<RatioRow> rows;
  double sup_ratio = 0.0;
  std::vector<std::string> notes;
};

/// ||T f||_{Psi or WL^Psi} / ||f||_Phi over the corpus; a lower bound for
/// the operator norm. Zero-norm inputs are skipped with a note.
RatioTable operator_ratio(OperatorKind op, const SampledField* b, const std::vector<NamedField>& corpus,
                          const YoungFunction& phi, const YoungFunction& psi, const BallFamily& family,
                          double alpha, bool weak);

struct AlmostDecreasingReport {
  bool holds = true;
  double constant = 1.0;  // smallest K over the sampled pairs
  double t1 = 0.0, t2 = 0.0;
};

/// Is t^{1+eps}/Psi(t) almost decreasing on log-spaced samples of
/// [t_min, t_max]? `holds` when the worst K stays within k_threshold.
AlmostDecreasingReport almost_decreasing_check(const YoungFunction& psi, double eps, double t_min, double t_max,
                                               int samples, double k_threshold = 10.0);

struct CharacOptions {
  /// Explicit probe centers; empty picks the node nearest the box center plus
  /// probe_count nodes on the box diagonal.
  std::vector<GroupPoint> centers;
  int probe_count = 10;
  /// Explicit probe radii; empty picks dyadic radii from 4 cells to a quarter of the box.
  std::vector<double> radii;
  FamilyParams family{.center_stride = 8, .r_min = 0.0, .ratio = std::numbers::sqrt2, .count = 0, .cover = true};
  bool operator_ratios = true;
  FamilyParams operator_family{.center_stride = 32, .r_min = 0.0, .ratio = 2.0, .count = 0, .cover = true};
  std::vector<NamedField> corpus;
  double sign_factor = 10.0;
  double stability_factor = 4.0;
  /// Functional sups below this count as vanishing.
  double vanish_tolerance = 1e-6;
};

struct BallRow {
  std::size_t id = 0;
  std::size_t probe = 0;
  Ball ball{GroupPoint{0.0}, 1.0};
  BallFunctionals values;
};

struct RadiusRow {
  double radius = 0.0;
  double f1 = 0.0, f2 = 0.0, f3 = 0.0, f4 = 0.0, lip_ball = 0.0;
};

struct CharacterizationReport {
  double beta = 0.0;
  std::string phi_label, psi_label;
  std::vector<BallRow> per_ball;
  std::vector<RadiusRow> per_radius;  // sup over probes at each radius
  double sup_f1 = 0.0, sup_f2 = 0.0, sup_f3 = 0.0, sup_f4 = 0.0, sup_lip = 0.0;
  std::vector<RatioTable> ratios;
  double sup_ratio = 0.0;
  double stability = 0.0;  // max/min over radii of the per-radius F2 sup
  bool scale_stable = true;
  double negative_average = 0.0;
  double negative_threshold = 0.0;
  bool negative_part = false;
  std::vector<std::string> verdict_notes;
};

/// Probe balls, per-ball functionals and diagnostics. Never a pass/fail
/// verdict: the notes describe scale stability and the sign diagnostic.
CharacterizationReport characterization_report(const SampledField& b, double beta, const YoungFunction& phi,
                                               const CharacOptions& options = {});

/// Probe balls used by characterization_report, radius-major.
std::vector<Ball> probe_balls(const GridSpec& grid, const CharacOptions& options);

}  // namespace maxlab
