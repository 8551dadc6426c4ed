// Acceptance gate: every release-blocking property of the library, one
// criterion per line, PASS/FAIL with a short measurement summary. Exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "rse/extension.hpp"
#include "rse/gamma.hpp"
#include "rse/holo_map.hpp"
#include "rse/semigroup.hpp"
#include "rse/verifiers.hpp"

using namespace rse;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

SpacePair unit_space() { return SpacePair(1, 1, Profile(2.0, 2.0)); }

double joint_dev(const ProductPoint& a, const ProductPoint& b) {
  return std::max((a.x - b.x).norm(), (a.y - b.y).norm());
}

// --------------------------------------------------------------------------
// 1. The jacobian-power rule at the critical exponent is appropriate for the
//    generated self-map family (margins >= -1e-12 over 1e4 samples).
Outcome criterion1() {
  double worst = 0.0;
  for (int n : {1, 2}) {
    for (double r : {1.0, 2.0}) {
      double alpha = 2.0 / (r * (n + 1));
      SpacePair sp(n, 1, Profile(2.0, r));
      Sampler sampler(SamplerConfig{.samples = 10000});
      CheckReport rep = check_appropriate_selfmap(
          GammaSpec::jacobian_power(Cx(alpha, 0.0)), selfmaps_fixing_zero(n), sp, sampler);
      worst = std::min(worst, rep.worst_margin);
      if (rep.verdict != Verdict::pass || rep.worst_margin < -1e-12) {
        return {false, "n=" + std::to_string(n) + " r=" + fmt("%.0f", r) +
                           " worst=" + fmt("%.3e", rep.worst_margin)};
      }
    }
  }
  return {true, "4 (n, r) cases, worst margin " + fmt("%.3e", worst)};
}

// 2. The profile-ratio monotonicity holds for random admissible exponents.
Outcome criterion2() {
  Sampler sampler(SamplerConfig{.samples = 10});
  for (int i = 0; i < 10; ++i) {
    double q = sampler.uniform(1.0, 2.0);
    double r = sampler.uniform(1.0, 4.0);
    int n = 1 + static_cast<int>(sampler.uniform(0.0, 3.0));
    if (n > 3) n = 3;
    double alpha = sampler.uniform(0.0, 2.0 / (r * (n + 1)));
    CheckReport rep = check_profile_ratio_monotone(q, r, alpha, n, 1000);
    if (rep.verdict != Verdict::pass) {
      return {false, "q=" + fmt("%.3f", q) + " r=" + fmt("%.3f", r) +
                         " alpha=" + fmt("%.4f", alpha) + " n=" + std::to_string(n)};
    }
  }
  return {true, "10 random admissible (q, r, alpha, n) tuples on 1e3-point grids"};
}

// 3. Extension algebra: self-mapping, composition, and inverses.
Outcome criterion3() {
  SpacePair sp = unit_space();
  GammaSpec gamma = GammaSpec::jacobian_power(Cx(0.5, 0.0));
  MapFamily family = selfmaps_fixing_zero(1);

  // (a) hat extensions map the product ball into itself: 1e4 points.
  Sampler sampler(SamplerConfig{.samples = 10000});
  double worst_margin = 1.0;
  {
    std::vector<ExtendedMap> ems;
    for (const auto& f : family.members) ems.push_back(extend(gamma.hat(), f, sp));
    for (int i = 0; i < 10000; ++i) {
      ProductPoint pt = sampler.product_point(sp);
      const ExtendedMap& em = ems[i % ems.size()];
      double m = ball_contains(sp, em(pt));
      worst_margin = std::min(worst_margin, m);
      if (m < -1e-12) return {false, "self-map margin " + fmt("%.3e", m)};
    }
  }

  // (b) hat extensions compose: 10 pairs x 1e3 points, tolerance 1e-9.
  double worst_comp = 0.0;
  {
    Sampler s2(SamplerConfig{.samples = 1000});
    std::size_t M = family.members.size();
    for (int p = 0; p < 10; ++p) {
      const HoloMap& f = family.members[p % M];
      const HoloMap& g = family.members[(p + 3) % M];
      ExtendedMap ef = extend(gamma.hat(), f, sp);
      ExtendedMap eg = extend(gamma.hat(), g, sp);
      ExtendedMap efg = extend(gamma.hat(), compose(f, g), sp);
      for (int i = 0; i < 100; ++i) {
        ProductPoint pt = s2.product_point(sp);
        double dev = joint_dev(efg(pt), ef(eg(pt)));
        worst_comp = std::max(worst_comp, dev);
        if (dev > 1e-9) {
          return {false, f.label() + " o " + g.label() + " deviation " + fmt("%.3e", dev)};
        }
      }
    }
  }

  // (c) the full extension absorbs self-maps and inverts: tolerance 1e-8.
  double worst_absorb = 0.0, worst_inv = 0.0;
  {
    Sampler s3(SamplerConfig{.samples = 1000});
    HoloMap g1 = half_map();
    HoloMap g2 = mobius(Cx(0.7, 0.0), Cx(0.0, 0.0), Cx(-0.3, 0.0), Cx(1.0, 0.0));
    for (const HoloMap& h : {cayley(), koebe()}) {
      ExtendedMap eh = extend(gamma, h, sp);
      for (const HoloMap& g : {g1, g2}) {
        ExtendedMap eg = extend(gamma.hat(), g, sp);
        ExtendedMap ehg = extend(gamma, compose(h, g), sp);
        for (int i = 0; i < 250; ++i) {
          ProductPoint pt = s3.product_point(sp);
          double dev = joint_dev(ehg(pt), eh(eg(pt)));
          worst_absorb = std::max(worst_absorb, dev);
          if (dev > 1e-8) return {false, "absorption deviation " + fmt("%.3e", dev)};
          double inv = joint_dev(extended_inverse(eh, eh(pt)), pt);
          worst_inv = std::max(worst_inv, inv);
          if (inv > 1e-8) return {false, "inverse round-trip " + fmt("%.3e", inv)};
        }
      }
    }
  }
  return {true, "self-map margin >= " + fmt("%.1e", worst_margin) + ", composition <= " +
                    fmt("%.1e", worst_comp) + ", absorption <= " + fmt("%.1e", worst_absorb) +
                    ", inverse <= " + fmt("%.1e", worst_inv)};
}

// 4. The transported multiplier on the image domain does not depend on the
//    parameterization (1e2 points, tolerance 1e-8).
Outcome criterion4() {
  GammaSpec spec = GammaSpec::jacobian_power(Cx(0.5, 0.0));
  HoloMap f = plane_affine1(Cx(0.9, 0.05), Cx(0.0, 0.0));
  double worst = 0.0;
  Sampler sampler(SamplerConfig{.samples = 100});
  for (const auto& [h1, h2] :
       {std::pair<HoloMap, HoloMap>{cayley(), compose(cayley(), disk_automorphism(Cx(0.3, 0.0)))},
        {koebe(), compose(koebe(), disk_automorphism(Cx(-0.2, 0.1)))}}) {
    for (int i = 0; i < 50; ++i) {
      Vec x = sampler.ball_point(1, NormSpec::euclidean());
      Vec w = h1.raw(x);
      double dev = std::abs(gamma_omega(spec, h1, f, w) - gamma_omega(spec, h2, f, w));
      worst = std::max(worst, dev);
      if (dev > 1e-8) return {false, "parameterization deviation " + fmt("%.3e", dev)};
    }
  }
  return {true, "2 reparameterized pairs x 50 points, max deviation " + fmt("%.1e", worst)};
}

// 5. The extended flows satisfy the semigroup law (3 specs, tolerance 1e-8).
Outcome criterion5() {
  SpacePair sp = unit_space();
  std::vector<ExtendedSemigroup> exts;
  exts.push_back({Semigroup::linear(LinearOperatorSpec(Mat::Identity(1, 1))),
                  GammaSpec::jacobian_power(Cx(0.5, 0.0)), Semigroup::catalog("identity"),
                  sp});
  exts.push_back({Semigroup::catalog("boundary-affine"),
                  GammaSpec::boundary_ratio_self(vec1(Cx(1.0, 0.0)), 2.0),
                  Semigroup::catalog("exp-contraction"), sp});
  exts.push_back({Semigroup::catalog("koenigs"), GammaSpec::jacobian_power(Cx(0.5, 0.0)),
                  Semigroup::contraction(LinearOperatorSpec(2.0 * Mat::Identity(1, 1))),
                  sp});
  double worst = 0.0;
  for (const auto& ext : exts) {
    Sampler sampler(SamplerConfig{.samples = 100});
    for (int i = 0; i < 100; ++i) {
      ProductPoint pt = sampler.product_point(sp);
      for (double t : {0.1, 0.5, 1.0}) {
        for (double s : {0.1, 0.5, 1.0}) {
          double dev = joint_dev(ext.flow(t + s, pt), ext.flow(t, ext.flow(s, pt)));
          worst = std::max(worst, dev);
          if (dev > 1e-8) {
            return {false, ext.base.label() + " law deviation " + fmt("%.3e", dev)};
          }
        }
      }
    }
  }
  return {true, "3 flow specs x 9 (t, s) pairs x 1e2 points, max deviation " +
                    fmt("%.1e", worst)};
}

// 6. The extended generator matches its displayed closed form after
//    extrapolation, and the raw quotients converge at first order.
Outcome criterion6() {
  SpacePair sp = unit_space();
  ExtendedSemigroup ext{Semigroup::catalog("koenigs"), GammaSpec::jacobian_power(Cx(0.5, 0.0)),
                        Semigroup::contraction(LinearOperatorSpec(2.0 * Mat::Identity(1, 1))),
                        sp};
  Cx x(0.3, 0.1), y(0.2, -0.1);
  ProductPoint pt{vec1(x), vec1(y)};
  // Base generator z(1-z); fiber factor F_t'(x)^{1/2} e^{-2t} differentiates
  // to -((1-2x)/2 + 2) y at t = 0.
  Vec exact(2);
  exact << x * (Cx(1.0, 0.0) - x), ((Cx(1.0, 0.0) - 2.0 * x) / 2.0 + 2.0) * y;

  std::vector<double> ladder = {0.1, 0.01, 0.001, 0.0001};
  GeneratorEstimate est = generator(ext, pt, ladder);
  double extrap_err = (est.value - exact).norm();
  if (extrap_err > 1e-5) return {false, "extrapolated error " + fmt("%.3e", extrap_err)};

  std::vector<double> raw_errs;
  for (const Vec& q : est.quotients) raw_errs.push_back((q - exact).norm());
  for (std::size_t k = 1; k < raw_errs.size(); ++k) {
    double ratio = raw_errs[k - 1] / raw_errs[k];
    if (ratio < 8.0) {
      return {false, "decade error ratio " + fmt("%.2f", ratio) + " < 8 at rung " +
                         std::to_string(k)};
    }
  }
  return {true, "extrapolated error " + fmt("%.1e", extrap_err) + ", decade ratios >= " +
                    fmt("%.1f", raw_errs[0] / raw_errs[1])};
}

// 7. Intertwining: the biholomorphic extension conjugates the hat-extended
//    flow to the image-side flow (tolerance 1e-8).
Outcome criterion7() {
  SpacePair sp = unit_space();
  double worst = 0.0;

  struct Case {
    HoloMap h;
    GammaSpec gamma;
    Semigroup base;   // self-map flow on the ball
    Semigroup g;      // fiber flow
    const char* name;
  };
  std::vector<Case> cases;
  cases.push_back({one_minus_z(), GammaSpec::boundary_ratio_biholo(vec1(Cx(1.0, 0.0)), 2.0),
                   Semigroup::catalog("boundary-affine"), Semigroup::catalog("exp-contraction"),
                   "shifted-disk"});
  cases.push_back({koebe(), GammaSpec::jacobian_power(Cx(0.5, 0.0)),
                   Semigroup::conjugated(koebe(), Semigroup::linear(
                       LinearOperatorSpec(Mat::Identity(1, 1)))),
                   Semigroup::catalog("identity"), "slit-plane"});

  Semigroup psi = Semigroup::linear(LinearOperatorSpec(Mat::Identity(1, 1)));
  for (const auto& c : cases) {
    ExtendedSemigroup hat_flow{c.base, c.gamma.hat(), c.g, sp};
    ExtendedMap lift = extend(c.gamma, c.h, sp);
    Sampler sampler(SamplerConfig{.samples = 100});
    for (int i = 0; i < 100; ++i) {
      ProductPoint pt = sampler.product_point(sp);
      for (double t : {0.1, 0.5, 1.0}) {
        ProductPoint lhs = lift(hat_flow.flow(t, pt));
        ProductPoint rhs = conjugate_extended_flow(c.h, c.gamma, psi, c.g, t, lift(pt));
        double dev = joint_dev(lhs, rhs);
        worst = std::max(worst, dev);
        if (dev > 1e-8) {
          return {false, std::string(c.name) + " deviation " + fmt("%.3e", dev) +
                             " at t=" + fmt("%.1f", t)};
        }
      }
    }
  }
  return {true, "2 conjugations x 3 times x 1e2 points, max deviation " + fmt("%.1e", worst)};
}

// 8. The classical extension of the slit map is spirallike for the joint
//    identity motion (N = 1e3, 25 time points).
Outcome criterion8() {
  Sampler sampler(SamplerConfig{.samples = 1000});
  CheckReport rep = check_extended_spirallike(
      koebe(), GammaSpec::jacobian_power(Cx(0.5, 0.0)),
      LinearOperatorSpec(Mat::Identity(1, 1)),
      LinearOperatorSpec(0.5 * Mat::Identity(1, 1)), unit_space(), sampler.t_grid(),
      sampler);
  long total = rep.decided + rep.unknown;
  bool ok = rep.verdict == Verdict::pass && rep.unknown * 20 <= total;
  return {ok, "verdict " + std::string(to_string(rep.verdict)) + ", worst margin " +
                  fmt("%.3e", rep.worst_margin) + ", unknown " +
                  std::to_string(rep.unknown) + "/" + std::to_string(total)};
}

// 9. The boundary-ratio extension of 1 - z is spirallike for both fiber
//    scalings, and the derived exponent is exactly 2 lambda / r.
Outcome criterion9() {
  GammaSpec gamma = GammaSpec::boundary_ratio_biholo(vec1(Cx(1.0, 0.0)), 2.0);
  LinearOperatorSpec A(Mat::Identity(1, 1));
  Cx c = derive_c(gamma, MotionSpec::linear(A));
  if (std::abs(c - Cx(1.0, 0.0)) > 1e-12) {
    return {false, "derived exponent " + fmt("%.6f", c.real()) + " != 1"};
  }
  {
    Sampler sampler(SamplerConfig{.samples = 200});
    CheckReport rep = derive_c_report(gamma, MotionSpec::linear(A), one_minus_z(),
                                      unit_space(), sampler);
    if (rep.verdict != Verdict::pass || rep.worst_margin < -1e-9) {
      return {false, "exponent residual " + fmt("%.3e", -rep.worst_margin)};
    }
  }
  for (double mu : {0.0, 1.0}) {
    Sampler sampler(SamplerConfig{.samples = 1000});
    CheckReport rep = check_extended_spirallike(one_minus_z(), gamma, A,
                                                LinearOperatorSpec(mu * Mat::Identity(1, 1)),
                                                unit_space(), sampler.t_grid(), sampler);
    if (rep.verdict != Verdict::pass) {
      return {false, "mu=" + fmt("%.0f", mu) + " verdict " + to_string(rep.verdict) +
                         ", worst " + fmt("%.3e", rep.worst_margin)};
    }
  }
  return {true, "C = 1 exactly, both fiber scalings pass with N = 1e3"};
}

// 10. Convexity in a direction: the half-plane extension passes; the slit
//     direction on the slit map is refuted with a reproducible witness.
Outcome criterion10() {
  {
    Sampler sampler(SamplerConfig{.samples = 1000});
    ExtendedMap em = classic_gk(1.0, cayley());
    CheckReport rep = check_convex_in_direction(em, vec1(Cx(1.0, 0.0)), Mat::Zero(1, 1),
                                                sampler.t_grid(), sampler);
    if (rep.verdict != Verdict::pass) {
      return {false, std::string("half-plane verdict ") + to_string(rep.verdict) +
                         ", worst " + fmt("%.3e", rep.worst_margin)};
    }
  }
  Sampler sampler(SamplerConfig{.samples = 1000});
  CheckReport neg =
      check_convex_in_direction(koebe(), vec1(Cx(-1.0, 0.0)), sampler.t_grid(), sampler);
  if (neg.verdict != Verdict::violation || !neg.witness.has_value()) {
    return {false, "negative control did not produce a violation with a witness"};
  }
  Vec w(static_cast<int>(neg.witness->point.size()));
  for (int i = 0; i < w.size(); ++i) w(i) = neg.witness->point[i];
  Membership m = image_contains(koebe(), w);
  if (m.state != Region::outside || std::abs(m.margin - neg.witness->margin) > 1e-9) {
    return {false, "witness failed to reproduce: stored " + fmt("%.3e", neg.witness->margin) +
                       ", re-evaluated " + fmt("%.3e", m.margin)};
  }
  return {true, "positive case passes; negative control refuted with witness margin " +
                    fmt("%.3e", neg.witness->margin)};
}

// 11. Invariance-manifold export: spiral and cylinder tables stay inside the
//     extended image (all margins > -1e-9).
Outcome criterion11() {
  ExtendedMap em = classic_rs(koebe());
  ProductPoint base = em({vec1(Cx(0.3, 0.0)), vec1(Cx(0.1, 0.0))});
  SamplerConfig cfg;
  Sampler sampler(cfg);
  std::vector<double> grid{0.0};
  for (double t : sampler.t_grid()) grid.push_back(t);
  std::vector<double> fan{0.25, 0.5, 0.75, 1.0};

  CurveTable spiral = export_invariance_manifold(
      em, MotionSpec::linear(LinearOperatorSpec(Mat::Identity(1, 1))), base, grid, fan);
  CurveTable cylinder = export_invariance_manifold(
      em, MotionSpec::shift(vec1(Cx(1.0, 0.0))), base, grid, fan);
  for (const CurveTable* t : {&spiral, &cylinder}) {
    if (t->rows.empty()) return {false, "empty table"};
    for (const auto& row : t->rows) {
      if (!(row.back() > -1e-9)) {
        return {false, "curve margin " + fmt("%.3e", row.back())};
      }
    }
  }
  return {true, std::to_string(spiral.rows.size()) + " spiral rows (worst " +
                    fmt("%.1e", spiral.worst_margin) + "), " +
                    std::to_string(cylinder.rows.size()) + " cylinder rows (worst " +
                    fmt("%.1e", cylinder.worst_margin) + ")"};
}

// 12. Growth bounds: the extended supremum is controlled by the three base
//     suprema, every supremum is finite, and refinement moves none by > 5%.
Outcome criterion12() {
  SpacePair sp = unit_space();
  GammaSpec gamma = GammaSpec::jacobian_power(Cx(0.5, 0.0));
  std::ostringstream detail;
  for (const HoloMap& h : {identity_map(1), log_map()}) {
    BlochBounds coarse = bloch_bounds(h, gamma, sp, 100);
    BlochBounds fine = bloch_bounds(h, gamma, sp, 400);
    double sums[4][2] = {{coarse.map_sup, fine.map_sup},
                         {coarse.gamma_sup, fine.gamma_sup},
                         {coarse.dgamma_sup, fine.dgamma_sup},
                         {coarse.extended_sup, fine.extended_sup}};
    for (auto& s : sums) {
      if (!std::isfinite(s[0]) || !std::isfinite(s[1])) return {false, "non-finite supremum"};
      double drift = std::abs(s[1] - s[0]) / std::max({s[0], s[1], 1e-12});
      if (drift > 0.05) {
        return {false, h.label() + " supremum drift " + fmt("%.1f%%", 100.0 * drift)};
      }
    }
    if (fine.extended_sup > fine.map_sup + fine.gamma_sup + fine.dgamma_sup + 1e-9) {
      return {false, h.label() + " extended supremum exceeds the three-term bound"};
    }
    if (fine.report.verdict != Verdict::pass) return {false, h.label() + " verdict not pass"};
    detail << h.label() << " sup " << fmt("%.3f", fine.extended_sup) << "  ";
  }
  return {true, detail.str() + "drift <= 5% under 4x refinement"};
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* label;
    std::function<Outcome()> fn;
  };
  std::vector<Entry> entries = {
      {1, "multiplier appropriateness at the critical exponent", criterion1},
      {2, "profile-ratio monotonicity for random admissible exponents", criterion2},
      {3, "extension algebra: self-maps, composition, inverses", criterion3},
      {4, "transported multiplier is parameterization-invariant", criterion4},
      {5, "extended flows satisfy the semigroup law", criterion5},
      {6, "extended generator matches its closed form at first order", criterion6},
      {7, "extension intertwines ball-side and image-side flows", criterion7},
      {8, "slit-map extension is spirallike for the identity motion", criterion8},
      {9, "boundary extension is spirallike with the derived exponent", criterion9},
      {10, "directional convexity passes and its negative control refutes", criterion10},
      {11, "exported invariance manifolds stay inside the image", criterion11},
      {12, "growth suprema are finite, bounded, and grid-stable", criterion12},
  };

  int failures = 0;
  for (const auto& e : entries) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = e.fn();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("CRITERION %2d: %s - %s (%s; %.1fs)\n", e.id, o.ok ? "PASS" : "FAIL", e.label,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.ok) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(entries.size()) - failures,
              entries.size());
  return failures == 0 ? 0 : 1;
}
