#include "rse/space.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

namespace rse {

NormSpec NormSpec::euclidean() { return NormSpec(true, 2.0); }

NormSpec NormSpec::lp(double s) { return NormSpec(false, s); }

double NormSpec::operator()(const Vec& v) const {
  if (euclidean_) return v.norm();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v(i)), s_);
  return std::pow(acc, 1.0 / s_);
}

std::string NormSpec::describe() const {
  return euclidean_ ? "euclidean" : "lp(" + std::to_string(s_) + ")";
}

namespace {

// Sampled norm axioms: absolute homogeneity and the triangle inequality,
// on deterministic pseudorandom vectors plus the coordinate directions.
void check_norm_axioms(const NormSpec& norm, int dim) {
  std::mt19937_64 rng(0x5eedu + static_cast<unsigned>(dim));
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  auto draw = [&](bool unit_axis, int axis) {
    Vec v = Vec::Zero(dim);
    if (unit_axis) {
      v(axis % dim) = Cx(1.0, 0.0);
    } else {
      for (int i = 0; i < dim; ++i) v(i) = Cx(gauss(rng), gauss(rng));
    }
    return v;
  };
  constexpr double tol = 1e-10;
  for (int k = 0; k < 32; ++k) {
    Vec u = draw(k < dim, k);
    Vec w = draw(false, 0);
    Cx c(unif(rng), unif(rng));
    double nu = norm(u), nw = norm(w);
    if (!(nu >= 0.0) || !(nw >= 0.0)) throw std::invalid_argument("norm produced a negative value");
    if (std::abs(norm(c * u) - std::abs(c) * nu) > tol * (1.0 + nu)) {
      throw std::invalid_argument("norm is not absolutely homogeneous");
    }
    if (norm(u + w) > nu + nw + tol * (1.0 + nu + nw)) {
      throw std::invalid_argument("norm violates the triangle inequality");
    }
  }
}

}  // namespace

SpacePair::SpacePair(int n_, int m_, Profile profile_, NormSpec nx_, NormSpec ny_)
    : n(n_), m(m_), profile(std::move(profile_)), norm_x(nx_), norm_y(ny_) {
  if (n < 1 || m < 1) throw std::invalid_argument("space dimensions must be >= 1");
  check_norm_axioms(norm_x, n);
  check_norm_axioms(norm_y, m);
}

double ball_contains(const SpacePair& sp, const ProductPoint& pt) {
  double sx = sp.nx(pt.x);
  if (sx >= 1.0) return -std::numeric_limits<double>::infinity();
  return sp.profile(sx) - sp.ny(pt.y);
}

double product_norm(const SpacePair& sp, const ProductPoint& pt) {
  const double sx = sp.nx(pt.x);
  const double sy = sp.ny(pt.y);
  if (sy == 0.0) return sx;  // p(1) = 0 puts (x,0) at gauge ||x||
  if (sx == 0.0) return sy;  // p(0) = 1
  // g(lambda) = lambda * p(sx/lambda) - sy is nondecreasing in lambda; bracket
  // [sx, sx+sy] then bisect. Concavity gives p >= 1-s, so the upper end already
  // satisfies g >= 0, but the doubling guard keeps general profiles safe.
  auto g = [&](double lam) { return lam * sp.profile(sx < lam ? sx / lam : 1.0) - sy; };
  double lo = sx, hi = sx + sy;
  int guard = 0;
  while (g(hi) < 0.0) {
    hi += (hi - sx) + sy;
    if (++guard > 128) throw std::logic_error("gauge bracket failure: profile not monotone");
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-12) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace rse
