#pragma once

#include <string>

#include "rse/gamma.hpp"
#include "rse/holo_map.hpp"
#include "rse/report.hpp"
#include "rse/sampler.hpp"
#include "rse/space.hpp"
#include "rse/types.hpp"

namespace rse {

// Extension of a map on the first factor to the product ball:
// (x, y) -> (f(x), Gamma(f, x) y). The same type serves the self-map side
// (f a ball self-map) and the biholomorphic side (f univalent on the ball).
class ExtendedMap {
 public:
  ExtendedMap(HoloMap base, GammaSpec gamma, SpacePair space);

  // Requires ||x||_X < 1; y is unrestricted (the multiplier depends on x only).
  ProductPoint operator()(const ProductPoint& pt) const;

  // The scalar multiplier Gamma(base, x).
  Cx gamma_at(const Vec& x) const;

  const HoloMap& base() const { return base_; }
  const GammaSpec& gamma() const { return gamma_; }
  const SpacePair& space() const { return space_; }

 private:
  HoloMap base_;
  GammaSpec gamma_;
  SpacePair space_;
};

// Builds the extended map after validating the gamma preconditions against f.
ExtendedMap extend(const GammaSpec& gamma, const HoloMap& f, const SpacePair& space);

// Classical constructors on the Euclidean product ball (profile q = r = 2).
// m is the dimension of the second factor.
ExtendedMap classic_rs(const HoloMap& f, int m = 1);                 // (f', )^{1/2}
ExtendedMap classic_gkk(double alpha, const HoloMap& f, int m = 1);  // alpha in [0, 1/2]
ExtendedMap classic_ps(const HoloMap& f, int m = 1);                 // (det J_f)^{1/(n+1)}
ExtendedMap classic_gk(double beta, const HoloMap& f, int m = 1);    // beta in [0, 1]

// Inverse of the extension: (z, w) -> (f^{-1}(z), Gamma(f, f^{-1}(z))^{-1} w).
// Throws std::runtime_error when z has no in-ball preimage.
ProductPoint extended_inverse(const ExtendedMap& em, const ProductPoint& pt);

// Membership in em(D) via the inverse formula: decide z against the base
// image, then compare ||w / Gamma|| with the profile at the preimage.
// margin = p(||x||) - ||Gamma^{-1} w|| when the base side is decided inside.
Membership extended_membership(const ExtendedMap& em, const ProductPoint& pt);

// Composition laws of the extensions over sampled product points:
// hat(gamma)-extensions compose along self-maps, and the biholomorphic
// extension absorbs a self-map on the right. Deviation tolerance 1e-9.
CheckReport check_composition_laws(const GammaSpec& gamma, const HoloMap& f,
                                   const HoloMap& g, const HoloMap& h,
                                   const SpacePair& sp, Sampler& sampler);

}  // namespace rse
