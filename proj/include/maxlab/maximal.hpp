#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "maxlab/ball_family.hpp"
#include "maxlab/grid.hpp"

namespace maxlab {

/// Raised when some node lies in no ball of the family.
class UncoveredNodeError : public std::domain_error {
 public:
  UncoveredNodeError(std::size_t node, const std::string& where)
      : std::domain_error("node " + std::to_string(node) + " at " + where + " is not covered by the ball family"),
        node_(node) {}
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

// All operators take the supremum over the balls of `family` that contain
// the output node. alpha must satisfy 0 <= alpha < Q.

/// M_alpha f(x) = sup_B |B|^{alpha/Q - 1} int_B |f|.
SampledField fractional_maximal(const SampledField& f, const BallFamily& family, double alpha);

/// Local variant over a fixed ball B0: candidates are B0 and the family
/// balls whose node set lies inside B0. Zero outside B0.
SampledField local_maximal(const SampledField& f, const Ball& b0, const BallFamily& family, double alpha);

/// M^# f(x) = sup_B |B|^{-1} int_B |f - f_B|.
SampledField sharp_maximal(const SampledField& f, const BallFamily& family);

/// M_{alpha,b} f(x) = sup_B |B|^{alpha/Q - 1} int_B |b(x) - b(y)| |f(y)| dy.
SampledField maximal_commutator(const SampledField& b, const SampledField& f, const BallFamily& family,
                                double alpha);

/// [b, M_alpha] f = b M_alpha f - M_alpha(b f).
SampledField commutator_maximal(const SampledField& b, const SampledField& f, const BallFamily& family,
                                double alpha);

/// [b, M^#] f = b M^# f - M^#(b f).
SampledField commutator_sharp(const SampledField& b, const SampledField& f, const BallFamily& family);

enum class OperatorKind { maximal, sharp, maximal_commutator, commutator_maximal, commutator_sharp };
enum class Backend { fast, reference };

/// Names: maxal, sharp, maxcomm, comm-max, comm-sharp.
std::optional<OperatorKind> parse_operator(std::string_view name);
std::string_view operator_name(OperatorKind kind);
bool needs_symbol(OperatorKind kind);

/// Dispatch by kind and backend; b is required for the commutator kinds.
SampledField apply_operator(OperatorKind kind, Backend backend, const SampledField* b, const SampledField& f,
                            const BallFamily& family, double alpha);

/// Family tailored to a fixed ball: keeps the balls of `family` that lie
/// inside b0, contain it, or miss it entirely, and adds b0 itself. On such a
/// family M_alpha(f chi_B0) coincides with the local operator on B0.
BallFamily nested_family(const GridSpec& grid, const Ball& b0, const BallFamily& family);

namespace detail {
void require_alpha(const GridSpec& grid, double alpha);
}

}  // namespace maxlab
