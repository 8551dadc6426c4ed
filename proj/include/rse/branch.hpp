#pragma once

#include <functional>
#include <stdexcept>

#include "rse/types.hpp"

namespace rse {

// A value on the continuation path fell below modulus 1e-12.
struct ZeroOnPathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Continuous logarithm of phi(1) for a zero-free path phi : [0,1] -> C,
// anchored at the principal log of phi(0). Evaluates the integral of the
// logarithmic derivative segmentwise: each adaptive segment contributes the
// principal log of its endpoint ratio, valid once |ratio - 1| <= 1/2. The
// result satisfies exp(L) = phi(1) to rounding and carries the winding of
// the path. Throws ZeroOnPathError if |phi| < 1e-12 at a visited node.
Cx path_log(const std::function<Cx(double)>& phi);

// exp(alpha * path_log), i.e. the branch of phi(1)^alpha continued from the
// principal power of phi(0).
Cx path_power(const std::function<Cx(double)>& phi, Cx alpha);

}  // namespace rse
