#pragma once

// Serial brute-force versions of the maximal operators. Each output node
// scans every ball and each ball scans every node; nothing is cached. The
// fast kernels must agree with these bit for bit.

#include "maxlab/maximal.hpp"

namespace maxlab::reference {

SampledField fractional_maximal(const SampledField& f, const BallFamily& family, double alpha);
SampledField local_maximal(const SampledField& f, const Ball& b0, const BallFamily& family, double alpha);
SampledField sharp_maximal(const SampledField& f, const BallFamily& family);
SampledField maximal_commutator(const SampledField& b, const SampledField& f, const BallFamily& family,
                                double alpha);
SampledField commutator_maximal(const SampledField& b, const SampledField& f, const BallFamily& family,
                                double alpha);
SampledField commutator_sharp(const SampledField& b, const SampledField& f, const BallFamily& family);

}  // namespace maxlab::reference
