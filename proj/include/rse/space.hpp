#pragma once

#include <string>

#include "rse/profile.hpp"
#include "rse/types.hpp"

namespace rse {

// Norm on a finite-dimensional complex space: Euclidean or l^s, s >= 1.
class NormSpec {
 public:
  static NormSpec euclidean();
  static NormSpec lp(double s);

  double operator()(const Vec& v) const;
  bool is_euclidean() const { return euclidean_; }
  double exponent() const { return s_; }
  std::string describe() const;

 private:
  NormSpec(bool euclid, double s) : euclidean_(euclid), s_(s) {}
  bool euclidean_ = true;
  double s_ = 2.0;
};

// Product-ball data: D = {(x,y) in C^n x C^m : ||x|| < 1, ||y|| < p(||x||)}.
// Construction checks dimensions and runs sampled norm-axiom checks
// (homogeneity and triangle inequality) on both factors.
struct SpacePair {
  SpacePair(int n, int m, Profile profile,
            NormSpec nx = NormSpec::euclidean(), NormSpec ny = NormSpec::euclidean());

  int n;
  int m;
  Profile profile;
  NormSpec norm_x;
  NormSpec norm_y;

  double nx(const Vec& x) const { return norm_x(x); }
  double ny(const Vec& y) const { return norm_y(y); }
};

struct ProductPoint {
  Vec x;
  Vec y;
};

// Signed membership margin p(||x||) - ||y||; -inf when ||x|| >= 1.
// The point lies in D iff the margin is positive.
double ball_contains(const SpacePair& sp, const ProductPoint& pt);

// Minkowski gauge of D: the unique lambda >= ||x|| with ||y|| = lambda * p(||x||/lambda),
// found by bisection (doubling bracket, absolute tolerance 1e-12).
double product_norm(const SpacePair& sp, const ProductPoint& pt);

}  // namespace rse
