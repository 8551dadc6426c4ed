#pragma once

#include <functional>

namespace rse {

// Radius profile p : [0,1] -> [0,1] bounding the second factor of a product
// ball {(x,y) : ||y|| < p(||x||)}. Admissible profiles satisfy p(0)=1, p(1)=0,
// strict decrease, and midpoint concavity; construction validates all three on
// a 1e3-point grid and rejects offenders.
class Profile {
 public:
  // Power profile p(s) = (1 - s^q)^(1/r), q >= 1, r >= 1.
  Profile(double q, double r);
  // General profile from an evaluator; validated by sampling.
  explicit Profile(std::function<double(double)> p);

  // Throws std::domain_error outside [0,1].
  double operator()(double s) const;

  bool is_power() const { return power_; }
  double q() const { return q_; }
  double r() const { return r_; }

 private:
  void validate() const;

  std::function<double(double)> eval_;
  bool power_ = false;
  double q_ = 0.0;
  double r_ = 0.0;
};

}  // namespace rse
