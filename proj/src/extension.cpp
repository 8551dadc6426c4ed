#include "rse/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rse/branch.hpp"

namespace rse {

ExtendedMap::ExtendedMap(HoloMap base, GammaSpec gamma, SpacePair space)
    : base_(std::move(base)), gamma_(std::move(gamma)), space_(std::move(space)) {}

ProductPoint ExtendedMap::operator()(const ProductPoint& pt) const {
  if (!(space_.nx(pt.x) < 1.0)) {
    throw std::domain_error("extended map evaluated outside the unit ball of X");
  }
  ProductPoint out;
  out.x = base_.raw(pt.x);
  out.y = gamma_at(pt.x) * pt.y;
  return out;
}

Cx ExtendedMap::gamma_at(const Vec& x) const { return gamma_eval(gamma_, base_, x); }

ExtendedMap extend(const GammaSpec& gamma, const HoloMap& f, const SpacePair& space) {
  if (f.dim() != space.n) {
    throw std::invalid_argument("extend: base map dimension does not match the space");
  }
  if (gamma.kind() == GammaSpec::Kind::ratio_power) {
    if (f.dim() != 1) throw std::invalid_argument("extend: ratio-power gamma is 1D only");
    if (std::abs(f.raw1(Cx(0.0, 0.0))) > 1e-10) {
      throw std::invalid_argument("extend: ratio-power gamma needs f(0) = 0");
    }
  }
  if (gamma.tau().size() != 0 && gamma.tau().size() != space.n) {
    throw std::invalid_argument("extend: gamma tau dimension does not match the space");
  }
  return ExtendedMap(f, gamma, space);
}

namespace {

SpacePair euclidean_space(int n, int m) { return SpacePair(n, m, Profile(2.0, 2.0)); }

}  // namespace

ExtendedMap classic_rs(const HoloMap& f, int m) { return classic_gkk(0.5, f, m); }

ExtendedMap classic_gkk(double alpha, const HoloMap& f, int m) {
  if (!(alpha >= 0.0 && alpha <= 0.5)) {
    throw std::invalid_argument("classic_gkk: alpha must lie in [0, 1/2]");
  }
  if (f.dim() != 1) throw std::invalid_argument("classic_gkk: base map must be 1D");
  return extend(GammaSpec::jacobian_power(Cx(alpha, 0.0)), f, euclidean_space(1, m));
}

ExtendedMap classic_ps(const HoloMap& f, int m) {
  int n = f.dim();
  return extend(GammaSpec::jacobian_power(Cx(1.0 / (n + 1), 0.0)), f, euclidean_space(n, m));
}

ExtendedMap classic_gk(double beta, const HoloMap& f, int m) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("classic_gk: beta must lie in [0, 1]");
  }
  return extend(GammaSpec::ratio_power(Cx(beta, 0.0)), f, euclidean_space(1, m));
}

ProductPoint extended_inverse(const ExtendedMap& em, const ProductPoint& pt) {
  auto x = invert(em.base(), pt.x);
  if (!x) throw std::runtime_error("extended_inverse: no in-ball preimage of the first factor");
  Cx g = em.gamma_at(*x);
  ProductPoint out;
  out.x = *x;
  out.y = pt.y / g;
  return out;
}

Membership extended_membership(const ExtendedMap& em, const ProductPoint& pt) {
  Membership base = image_contains(em.base(), pt.x);
  if (base.state != Region::inside) return base;
  std::optional<Vec> x = base.preimage;
  if (!x) x = invert(em.base(), pt.x);
  if (!x) return Membership{Region::unknown, 0.0, std::nullopt};
  Cx g = em.gamma_at(*x);
  const SpacePair& sp = em.space();
  double margin = sp.profile(sp.nx(*x)) - sp.ny((pt.y / g).eval());
  Membership out;
  out.margin = margin;
  out.state = margin > 0.0 ? Region::inside : Region::outside;
  out.preimage = x;
  return out;
}

CheckReport check_composition_laws(const GammaSpec& gamma, const HoloMap& f,
                                   const HoloMap& g, const HoloMap& h,
                                   const SpacePair& sp, Sampler& sampler) {
  CheckReport rep;
  rep.check = "extension-composition-laws";
  {
    nlohmann::json j;
    j["gamma"] = gamma.describe();
    j["f"] = f.label();
    j["g"] = g.label();
    j["h"] = h.label();
    j["samples"] = sampler.config().samples;
    j["seed"] = sampler.config().seed;
    rep.params = j.dump();
  }

  GammaSpec hat = gamma.hat();
  ExtendedMap ef(f, hat, sp);
  ExtendedMap eg(g, hat, sp);
  ExtendedMap efg(compose(f, g), hat, sp);
  ExtendedMap eh(h, gamma, sp);
  ExtendedMap ehg(compose(h, g), gamma, sp);

  auto deviation = [&](const ProductPoint& a, const ProductPoint& b) {
    return std::max(sp.nx((a.x - b.x).eval()), sp.ny((a.y - b.y).eval()));
  };

  double max_dev = 0.0;
  bool violated = false;
  const int N = sampler.config().samples;
  for (int i = 0; i < N; ++i) {
    ProductPoint pt = sampler.product_point(sp);
    try {
      ProductPoint mid = eg(pt);
      double d1 = deviation(efg(pt), ef(mid));
      double d2 = deviation(ehg(pt), eh(mid));
      double d = std::max(d1, d2);
      max_dev = std::max(max_dev, d);
      if (d > 1e-9) {
        violated = true;
        if (!rep.witness) {
          Witness w;
          w.point.assign(pt.x.data(), pt.x.data() + pt.x.size());
          w.point.insert(w.point.end(), pt.y.data(), pt.y.data() + pt.y.size());
          w.margin = -d;
          rep.witness = w;
          rep.notes.push_back(d1 >= d2 ? "self-map composition law failed"
                                       : "biholomorphic composition law failed");
        }
      }
      ++rep.decided;
    } catch (const ZeroOnPathError&) {
      ++rep.unknown;
    }
  }
  rep.worst_margin = -max_dev;
  rep.verdict = standard_verdict(rep.decided, rep.unknown, rep.worst_margin, violated);
  return rep;
}

}  // namespace rse
