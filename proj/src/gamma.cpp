#include "rse/gamma.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "rse/branch.hpp"

namespace rse {

// ---------------------------------------------------------------------------
// GammaSpec

GammaSpec GammaSpec::jacobian_power(Cx alpha) {
  GammaSpec g;
  g.kind_ = Kind::jacobian_power;
  g.exponent_ = alpha;
  return g;
}

GammaSpec GammaSpec::ratio_power(Cx beta) {
  GammaSpec g;
  g.kind_ = Kind::ratio_power;
  g.exponent_ = beta;
  return g;
}

GammaSpec GammaSpec::boundary_ratio_self(Vec tau, double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("boundary ratio needs r >= 1");
  if (std::abs(tau.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("boundary ratio needs a unit tau");
  }
  GammaSpec g;
  g.kind_ = Kind::boundary_ratio_self;
  g.r_ = r;
  g.exponent_ = Cx(2.0 / r, 0.0);
  g.tau_ = std::move(tau);
  return g;
}

GammaSpec GammaSpec::boundary_ratio_biholo(Vec tau, double r) {
  GammaSpec g = boundary_ratio_self(std::move(tau), r);
  g.kind_ = Kind::boundary_ratio_biholo;
  return g;
}

GammaSpec GammaSpec::product(std::vector<GammaSpec> factors) {
  if (factors.empty()) throw std::invalid_argument("product gamma needs factors");
  GammaSpec g;
  g.kind_ = Kind::product;
  g.factors_ = std::move(factors);
  return g;
}

GammaSpec GammaSpec::hat() const {
  if (kind_ == Kind::boundary_ratio_biholo) {
    return boundary_ratio_self(tau_, r_);
  }
  if (kind_ == Kind::product) {
    std::vector<GammaSpec> hats;
    hats.reserve(factors_.size());
    for (const auto& f : factors_) hats.push_back(f.hat());
    return product(std::move(hats));
  }
  return *this;
}

std::string GammaSpec::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::jacobian_power:
      os << "jacobian-power(" << exponent_.real();
      if (exponent_.imag() != 0.0) os << "+" << exponent_.imag() << "i";
      os << ")";
      break;
    case Kind::ratio_power:
      os << "ratio-power(" << exponent_.real() << ")";
      break;
    case Kind::boundary_ratio_self:
      os << "boundary-ratio-self(r=" << r_ << ")";
      break;
    case Kind::boundary_ratio_biholo:
      os << "boundary-ratio-biholo(r=" << r_ << ")";
      break;
    case Kind::product: {
      os << "product(";
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        os << (i ? "," : "") << factors_[i].describe();
      }
      os << ")";
      break;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Vec unit_tau(const GammaSpec& spec, int dim) {
  if (spec.tau().size() == 0) {
    Vec t = Vec::Zero(dim);
    t(0) = Cx(1.0, 0.0);
    return t;
  }
  if (spec.tau().size() != dim) {
    throw std::invalid_argument("gamma tau dimension does not match the map");
  }
  return spec.tau();
}

}  // namespace

Cx gamma_eval(const GammaSpec& spec, const HoloMap& f, const Vec& x) {
  switch (spec.kind()) {
    case GammaSpec::Kind::jacobian_power: {
      auto phi = [&](double t) { return f.jacobian_det((t * x).eval()); };
      return path_power(phi, spec.exponent());
    }
    case GammaSpec::Kind::ratio_power: {
      if (f.dim() != 1) throw std::invalid_argument("ratio-power gamma is 1D only");
      if (std::abs(f.raw1(Cx(0.0, 0.0))) > 1e-10) {
        throw std::invalid_argument("ratio-power gamma needs f(0) = 0");
      }
      Cx x0 = x(0);
      if (std::abs(x0) == 0.0) {
        return std::pow(f.deriv1(Cx(0.0, 0.0)), spec.exponent());
      }
      auto phi = [&](double t) {
        if (t == 0.0) return f.deriv1(Cx(0.0, 0.0));
        Cx z = t * x0;
        return f.raw1(z) / z;
      };
      return path_power(phi, spec.exponent());
    }
    case GammaSpec::Kind::boundary_ratio_self: {
      Vec tau = unit_tau(spec, f.dim());
      auto phi = [&](double t) {
        Vec z = t * x;
        return (Cx(1.0, 0.0) - pair_with(f.raw(z), tau)) / (Cx(1.0, 0.0) - pair_with(z, tau));
      };
      return path_power(phi, spec.exponent());
    }
    case GammaSpec::Kind::boundary_ratio_biholo: {
      Vec tau = unit_tau(spec, f.dim());
      auto phi = [&](double t) {
        Vec z = t * x;
        return pair_with(f.raw(z), tau) / (Cx(1.0, 0.0) - pair_with(z, tau));
      };
      return path_power(phi, spec.exponent());
    }
    case GammaSpec::Kind::product: {
      Cx acc(1.0, 0.0);
      for (const auto& g : spec.factors()) acc *= gamma_eval(g, f, x);
      return acc;
    }
  }
  throw std::logic_error("unreachable gamma kind");
}

Cx branch_power(const HoloMap& g, Cx alpha, Cx z) {
  auto phi = [&](double t) { return g.raw1(t * z); };
  return path_power(phi, alpha);
}

Cx gamma_omega(const GammaSpec& spec, const HoloMap& h, const HoloMap& f, const Vec& x) {
  auto u = invert(h, x);
  if (!u) throw std::runtime_error("gamma_omega: point has no preimage under h");
  Cx num = gamma_eval(spec, compose(f, h), *u);
  Cx den = gamma_eval(spec, h, *u);
  return num / den;
}

// ---------------------------------------------------------------------------
// Families

namespace {

HoloMap zero_fixing_mobius(double c) {
  // ((1-c) z) / (1 - c z): self-map of the disk fixing 0, derivative 1-c at 0.
  return mobius(Cx(1.0 - c, 0.0), 0.0, Cx(-c, 0.0), 1.0);
}

std::function<bool(const HoloMap&)> selfmap_predicate(int n, bool fix_zero) {
  return [n, fix_zero](const HoloMap& f) {
    if (f.dim() != n) return false;
    if (fix_zero && f.raw(Vec::Zero(n)).norm() > 1e-10) return false;
    // Sampled self-map test on a deterministic shell grid.
    for (double rho : {0.3, 0.6, 0.9, 0.99}) {
      for (int k = 0; k < 8; ++k) {
        Vec z = Vec::Zero(n);
        double angle = 0.785398163397448 * k + 0.1;
        z(k % n) = std::polar(rho, angle);
        if (!(f.raw(z).norm() < 1.0 + 1e-12)) return false;
      }
    }
    return true;
  };
}

void add_pairs(MapFamily& fam, std::size_t count) {
  const auto& m = fam.members;
  for (std::size_t i = 0; i < m.size() && fam.composition_pairs.size() < count; ++i) {
    for (std::size_t j = 0; j < m.size() && fam.composition_pairs.size() < count; ++j) {
      if (i == j && m.size() > 1) continue;
      fam.composition_pairs.emplace_back(m[i], m[j]);
    }
  }
}

}  // namespace

MapFamily selfmaps_fixing_zero(int n) {
  if (n < 1) throw std::invalid_argument("family dimension must be >= 1");
  MapFamily fam;
  fam.label = "selfmaps-fixing-zero(" + std::to_string(n) + ")";
  std::vector<HoloMap> base1;
  base1.push_back(identity_map(1));
  base1.push_back(zero_fixing_mobius(0.2));
  base1.push_back(half_map());
  base1.push_back(zero_fixing_mobius(0.7));
  base1.push_back(scale(std::polar(0.8, 0.3), identity_map(1)));
  base1.push_back(scale(std::polar(0.9, -0.45), zero_fixing_mobius(0.5)));
  base1.push_back(compose(half_map(), scale(std::polar(0.7, 0.25), identity_map(1))));
  if (n == 1) {
    fam.members = std::move(base1);
  } else if (n == 2) {
    fam.members.push_back(identity_map(2));
    fam.members.push_back(coordinatewise({base1[1], base1[2]}));
    fam.members.push_back(coordinatewise({base1[4], base1[3]}));
    fam.members.push_back(coordinatewise({base1[6], base1[5]}));
    Mat m1(2, 2);
    m1 << Cx(0.8, 0.0), Cx(0.1, 0.05), Cx(0.0, 0.0), Cx(0.7, 0.0);
    fam.members.push_back(linear_ball_map(m1));
    double th = 0.6;
    Mat rot(2, 2);
    rot << Cx(std::cos(th), 0.0), Cx(-std::sin(th), 0.0), Cx(std::sin(th), 0.0),
        Cx(std::cos(th), 0.0);
    fam.members.push_back(linear_ball_map(rot));
    fam.members.push_back(compose(fam.members[1], fam.members[5]));
  } else {
    fam.members.push_back(identity_map(n));
    std::vector<HoloMap> comps;
    for (int i = 0; i < n; ++i) comps.push_back(base1[1 + (i % 3)]);
    fam.members.push_back(coordinatewise(comps));
    fam.members.push_back(linear_ball_map(0.8 * Mat::Identity(n, n)));
  }
  fam.predicate = selfmap_predicate(n, true);
  add_pairs(fam, 10);
  return fam;
}

MapFamily selfmaps_fixing_boundary() {
  MapFamily fam;
  fam.label = "selfmaps-fixing-boundary(tau=1)";
  auto toward_one = [](double t) {
    // Time-t map of the affine flow fixing 1: z -> 1 - e^{-t}(1 - z).
    double e = std::exp(-t);
    return affine1(Cx(1.0 - e, 0.0), Cx(e, 0.0));
  };
  fam.members.push_back(identity_map(1));
  fam.members.push_back(hyperbolic_automorphism(0.2));
  fam.members.push_back(hyperbolic_automorphism(0.5));
  fam.members.push_back(toward_one(0.3));
  fam.members.push_back(toward_one(1.0));
  fam.members.push_back(compose(hyperbolic_automorphism(0.3), toward_one(0.5)));
  fam.predicate = [](const HoloMap& f) {
    if (f.dim() != 1) return false;
    auto base = selfmap_predicate(1, false);
    if (!base(f)) return false;
    // Radial probe of the boundary fixed point at tau = 1.
    return std::abs(f.raw1(Cx(0.9999, 0.0)) - Cx(1.0, 0.0)) < 1e-2;
  };
  add_pairs(fam, 10);
  return fam;
}

MapFamily biholo_normalized() {
  MapFamily fam;
  fam.label = "biholo-normalized";
  fam.members.push_back(koebe());
  fam.members.push_back(cayley());
  fam.members.push_back(log_map());
  fam.members.push_back(identity_map(1));
  fam.members.push_back(scale(std::polar(0.6, 0.2), koebe()));
  fam.predicate = [](const HoloMap& h) {
    return h.dim() == 1 && std::abs(h.raw1(Cx(0.0, 0.0))) <= 1e-10;
  };
  return fam;
}

MapFamily biholo_boundary() {
  MapFamily fam;
  fam.label = "biholo-boundary(tau=1)";
  fam.members.push_back(one_minus_z());
  fam.members.push_back(affine1(1.0, Cx(-0.8, 0.0)));
  fam.members.push_back(compose(plane_affine1(std::exp(Cx(-0.4, 0.0)), 0.0), one_minus_z()));
  fam.members.push_back(mobius(-1.0, 1.0, Cx(-0.3, 0.0), 1.0));
  fam.predicate = [](const HoloMap& h) {
    if (h.dim() != 1) return false;
    for (double rho : {0.0, 0.4, 0.8, 0.97}) {
      for (int k = 0; k < 8; ++k) {
        Cx z = std::polar(rho, 0.785398163397448 * k);
        if (std::abs(h.raw1(z)) < 1e-6) return false;
      }
    }
    return true;
  };
  return fam;
}

// ---------------------------------------------------------------------------
// Appropriateness checks

namespace {

std::string params_json(std::initializer_list<std::pair<std::string, nlohmann::json>> kv) {
  nlohmann::json j;
  for (const auto& [k, v] : kv) j[k] = v;
  return j.dump();
}

void record_violation(CheckReport& rep, const Vec& x, double margin, const std::string& note) {
  if (rep.witness && rep.witness->margin <= margin) return;
  Witness w;
  w.point.assign(x.data(), x.data() + x.size());
  w.margin = margin;
  rep.witness = w;
  rep.notes.push_back(note);
}

}  // namespace

CheckReport check_appropriate_selfmap(const GammaSpec& spec, const MapFamily& family,
                                      const SpacePair& sp, Sampler& sampler) {
  CheckReport rep;
  rep.check = "appropriate-selfmap";
  rep.params = params_json({{"gamma", spec.describe()},
                            {"family", family.label},
                            {"samples", sampler.config().samples},
                            {"seed", sampler.config().seed}});
  rep.worst_margin = std::numeric_limits<double>::infinity();
  bool violated = false;

  const int N = sampler.config().samples;
  HoloMap id = identity_map(sp.n);
  for (int i = 0; i < N; ++i) {
    const HoloMap& f = family.members[i % family.members.size()];
    Vec x = sampler.ball_point(sp.n, sp.norm_x);
    try {
      // (i) identity normalization.
      Cx gid = gamma_eval(spec, id, x);
      if (std::abs(gid - Cx(1.0, 0.0)) > 1e-12) {
        violated = true;
        record_violation(rep, x, -std::abs(gid - Cx(1.0, 0.0)),
                         "identity normalization failed");
      }
      // (iii) invertibility and (iv) the profile bound.
      Cx g = gamma_eval(spec, f, x);
      if (!(std::abs(g) > 1e-12)) {
        violated = true;
        record_violation(rep, x, -1.0, "gamma vanished on " + f.label());
      }
      double ratio = sp.profile(sp.nx(f.raw(x))) / sp.profile(sp.nx(x));
      double margin = ratio - std::abs(g);
      rep.worst_margin = std::min(rep.worst_margin, margin);
      if (margin < -1e-12) {
        violated = true;
        record_violation(rep, x, margin, "profile bound failed on " + f.label());
      }
      ++rep.decided;
    } catch (const ZeroOnPathError&) {
      ++rep.unknown;
    }
  }

  // (ii) chain rule on catalog pairs.
  const int chain_samples = std::max(8, N / 64);
  for (const auto& [f, g] : family.composition_pairs) {
    HoloMap fg = compose(f, g);
    for (int i = 0; i < chain_samples; ++i) {
      Vec x = sampler.ball_point(sp.n, sp.norm_x);
      try {
        Cx lhs = gamma_eval(spec, f, g.raw(x)) * gamma_eval(spec, g, x);
        Cx rhs = gamma_eval(spec, fg, x);
        double resid = std::abs(lhs - rhs);
        if (resid > 1e-9) {
          violated = true;
          record_violation(rep, x, -resid,
                           "chain rule failed on " + f.label() + " after " + g.label());
        }
        ++rep.decided;
      } catch (const ZeroOnPathError&) {
        ++rep.unknown;
      }
    }
  }

  if (rep.worst_margin == std::numeric_limits<double>::infinity()) rep.worst_margin = 0.0;
  rep.verdict = standard_verdict(rep.decided, rep.unknown, rep.worst_margin, violated);
  return rep;
}

CheckReport check_appropriate_biholo(const GammaSpec& spec, const MapFamily& biholos,
                                     const MapFamily& selfmaps,
                                     const std::vector<NestingCert>& certs,
                                     const SpacePair& sp, Sampler& sampler) {
  CheckReport rep;
  rep.check = "appropriate-biholo";
  rep.params = params_json({{"gamma", spec.describe()},
                            {"family", biholos.label},
                            {"selfmaps", selfmaps.label},
                            {"certs", certs.size()},
                            {"seed", sampler.config().seed}});
  rep.worst_margin = std::numeric_limits<double>::infinity();
  rep.notes.push_back("family closure checked on supplied nesting certificates only");
  bool violated = false;
  GammaSpec hat = spec.hat();

  // (i) certified nesting: h2^{-1} o h1 maps into the ball.
  for (const auto& cert : certs) {
    for (int i = 0; i < 16; ++i) {
      Vec z = sampler.ball_point(sp.n, sp.norm_x);
      Vec w = cert.h1.raw(z);
      try {
        auto back = invert(cert.h2, w);
        if (!back) {
          ++rep.unknown;
          continue;
        }
        double margin = 1.0 - back->norm();
        rep.worst_margin = std::min(rep.worst_margin, margin);
        if (margin <= 0.0) {
          violated = true;
          record_violation(rep, z, margin, "nesting certificate failed: " + cert.h1.label() +
                                               " exits " + cert.h2.label() + "(D)");
        }
        ++rep.decided;
      } catch (const NonUnivalentError&) {
        ++rep.unknown;
      }
    }
  }

  // (ii) chain rule against the self-map side; (iii) nonvanishing.
  const int chain_samples = std::max(8, sampler.config().samples / 32);
  for (const auto& h : biholos.members) {
    for (const auto& g : selfmaps.members) {
      HoloMap hg = compose(h, g);
      for (int i = 0; i < chain_samples; ++i) {
        Vec x = sampler.ball_point(sp.n, sp.norm_x);
        try {
          Cx full = gamma_eval(spec, h, g.raw(x));
          Cx self = gamma_eval(hat, g, x);
          Cx rhs = gamma_eval(spec, hg, x);
          if (!(std::abs(full) > 1e-12) || !(std::abs(rhs) > 1e-12)) {
            violated = true;
            record_violation(rep, x, -1.0, "gamma vanished on " + h.label());
          }
          double resid = std::abs(full * self - rhs);
          if (resid > 1e-9) {
            violated = true;
            record_violation(rep, x, -resid,
                             "chain rule failed on " + h.label() + " after " + g.label());
          }
          ++rep.decided;
        } catch (const ZeroOnPathError&) {
          ++rep.unknown;
        }
      }
    }
  }

  rep.verdict = standard_verdict(rep.decided, rep.unknown,
                                 violated ? -1.0 : 0.0, violated);
  if (rep.worst_margin == std::numeric_limits<double>::infinity()) rep.worst_margin = 0.0;
  return rep;
}

CheckReport check_profile_ratio_monotone(double q, double r, double alpha, int n, int grid) {
  CheckReport rep;
  rep.check = "profile-ratio-monotone";
  rep.params = params_json({{"q", q}, {"r", r}, {"alpha", alpha}, {"n", n}, {"grid", grid}});
  rep.worst_margin = std::numeric_limits<double>::infinity();
  double top = (n + 1) * alpha / 2.0;
  auto g = [&](double t) {
    return std::pow(1.0 - t * t, top) / std::pow(1.0 - std::pow(t, q), 1.0 / r);
  };
  bool violated = false;
  double prev = g(1.0 / grid);
  for (int k = 2; k < grid; ++k) {
    double t = static_cast<double>(k) / grid;
    double cur = g(t);
    double margin = cur - prev;
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < -1e-12) {
      violated = true;
      if (!rep.witness) {
        Witness w;
        w.point = {Cx(t, 0.0)};
        w.margin = margin;
        rep.witness = w;
        rep.notes.push_back("ratio decreased between consecutive grid points");
      }
    }
    prev = cur;
    ++rep.decided;
  }
  rep.verdict = violated ? Verdict::violation : Verdict::pass;
  return rep;
}

}  // namespace rse
