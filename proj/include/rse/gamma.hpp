#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rse/holo_map.hpp"
#include "rse/report.hpp"
#include "rse/sampler.hpp"
#include "rse/space.hpp"
#include "rse/types.hpp"

namespace rse {

// Scalar multiplier rule Gamma(f, x) * id_Y attached to a family of maps on
// the first factor. All variants are branch-continuous along the radial path
// [0, x] and anchored at the principal power of the value at x = 0, so the
// identity map always yields 1.
class GammaSpec {
 public:
  enum class Kind {
    jacobian_power,        // (det J_f(x))^alpha
    ratio_power,           // (f(x)/x)^beta, 1D, f(0) = 0
    boundary_ratio_self,   // ((1 - <f(x),tau>) / (1 - <x,tau>))^(2/r)
    boundary_ratio_biholo, // (<f(x),tau> / (1 - <x,tau>))^(2/r)
    product,
  };

  static GammaSpec jacobian_power(Cx alpha);
  static GammaSpec ratio_power(Cx beta);
  static GammaSpec boundary_ratio_self(Vec tau, double r);
  static GammaSpec boundary_ratio_biholo(Vec tau, double r);
  static GammaSpec product(std::vector<GammaSpec> factors);

  Kind kind() const { return kind_; }
  Cx exponent() const { return exponent_; }  // alpha / beta / 2/r
  double r() const { return r_; }
  const Vec& tau() const { return tau_; }
  const std::vector<GammaSpec>& factors() const { return factors_; }

  // Self-map-side pairing: the variant that satisfies the chain rule on a
  // family of self-maps (boundary_ratio_biholo pairs with boundary_ratio_self;
  // the others pair with themselves).
  GammaSpec hat() const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::jacobian_power;
  Cx exponent_{0.0, 0.0};
  double r_ = 2.0;
  Vec tau_;
  std::vector<GammaSpec> factors_;
};

// Branch-continuous scalar Gamma(f, x). Throws ZeroOnPathError when the
// defining expression vanishes along [0, x].
Cx gamma_eval(const GammaSpec& spec, const HoloMap& f, const Vec& x);

// Branch of g(z)^alpha continued radially from the principal power at 0
// (1D convenience used by tests and the jacobian variant).
Cx branch_power(const HoloMap& g, Cx alpha, Cx z);

// Transport of Gamma to Omega = h(D1):
// Gamma_Omega(f, x) = Gamma(f o h, h^{-1}(x)) * Gamma(h, h^{-1}(x))^{-1}.
Cx gamma_omega(const GammaSpec& spec, const HoloMap& h, const HoloMap& f, const Vec& x);

// Test family on the first factor: generated members plus a numerically
// checkable membership predicate.
struct MapFamily {
  std::string label;
  std::vector<HoloMap> members;
  // Sampled structural check (self-map, fixed point, boundary fixed point...).
  std::function<bool(const HoloMap&)> predicate;
  // Ordered pairs used for chain-rule checks.
  std::vector<std::pair<HoloMap, HoloMap>> composition_pairs;
};

MapFamily selfmaps_fixing_zero(int n);
MapFamily selfmaps_fixing_boundary();          // 1D, tau = 1
MapFamily biholo_normalized();                 // 1D biholomorphic, h(0) = 0
MapFamily biholo_boundary();                   // 1D biholomorphic, <h,1> != 0

// Definition-style appropriateness on a self-map family: (i) identity
// normalization, (ii) chain rule on composition pairs (tol 1e-9),
// (iii) invertibility |Gamma| > 1e-12, (iv) |Gamma| <= p(||f(x)||)/p(||x||)
// with margin >= -1e-12. worst_margin reports the (iv) margin.
CheckReport check_appropriate_selfmap(const GammaSpec& spec, const MapFamily& family,
                                      const SpacePair& sp, Sampler& sampler);

// Nesting certificate h1(D1) subset h2(D1) supplied by the caller.
struct NestingCert {
  HoloMap h1;
  HoloMap h2;
};

// Biholomorphic-side appropriateness: (i) h2^{-1} o h1 is a self-map for each
// certificate, (ii) Gamma(h, g(x)) * GammaHat(g, x) = Gamma(h o g, x) to 1e-9,
// (iii) nonvanishing. Limitations (sampled closure only) are recorded in notes.
CheckReport check_appropriate_biholo(const GammaSpec& spec, const MapFamily& biholos,
                                     const MapFamily& selfmaps,
                                     const std::vector<NestingCert>& certs,
                                     const SpacePair& sp, Sampler& sampler);

// Monotonicity of t -> (1-t^2)^((n+1)alpha/2) / (1-t^q)^(1/r) on (0,1),
// grid-checked; the inequality behind jacobian-power appropriateness for
// q <= 2, alpha <= 2/(r(n+1)).
CheckReport check_profile_ratio_monotone(double q, double r, double alpha, int n,
                                         int grid = 1000);

}  // namespace rse
