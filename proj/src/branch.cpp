#include "rse/branch.hpp"

#include <cmath>

namespace rse {
namespace {

constexpr double kZeroTol = 1e-12;
constexpr int kMaxDepth = 48;

Cx checked(const std::function<Cx(double)>& phi, double t) {
  Cx v = phi(t);
  if (!(std::abs(v) > kZeroTol)) {
    throw ZeroOnPathError("branch continuation hit a zero (|phi| <= 1e-12 on the path)");
  }
  return v;
}

// Accumulates the continuous log increment over [t0, t1]; bisects until the
// endpoint ratio sits in |w - 1| <= 1/2, where the principal log is the
// correct continuation increment.
Cx segment_log(const std::function<Cx(double)>& phi, double t0, Cx v0, double t1, Cx v1,
               int depth) {
  Cx ratio = v1 / v0;
  if (std::abs(ratio - Cx(1.0, 0.0)) <= 0.5) return std::log(ratio);
  if (depth >= kMaxDepth) {
    throw std::logic_error("branch continuation stalled: path varies too fast");
  }
  double tm = 0.5 * (t0 + t1);
  Cx vm = checked(phi, tm);
  return segment_log(phi, t0, v0, tm, vm, depth + 1) +
         segment_log(phi, tm, vm, t1, v1, depth + 1);
}

}  // namespace

Cx path_log(const std::function<Cx(double)>& phi) {
  Cx v0 = checked(phi, 0.0);
  Cx acc = std::log(v0);
  // Eight initial segments; each refines itself as needed.
  Cx prev = v0;
  double tprev = 0.0;
  for (int k = 1; k <= 8; ++k) {
    double t = static_cast<double>(k) / 8.0;
    Cx v = checked(phi, t);
    acc += segment_log(phi, tprev, prev, t, v, 0);
    tprev = t;
    prev = v;
  }
  return acc;
}

Cx path_power(const std::function<Cx(double)>& phi, Cx alpha) {
  return std::exp(alpha * path_log(phi));
}

}  // namespace rse
