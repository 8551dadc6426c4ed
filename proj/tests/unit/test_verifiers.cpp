#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "rse/extension.hpp"
#include "rse/verifiers.hpp"

using namespace rse;

namespace {

SpacePair unit_space() { return SpacePair(1, 1, Profile(2.0, 2.0)); }

std::vector<double> short_grid() { return {0.1, 0.5, 1.0, 2.0, 5.0}; }

}  // namespace

TEST_SUITE("verifiers") {

TEST_CASE("closed-form exponent of the jacobian rule") {
  Mat A2(2, 2);
  A2 << Cx(1.0, 0.5), Cx(0.3, 0.0), Cx(0.0, 0.0), Cx(2.0, -0.2);
  GammaSpec g = GammaSpec::jacobian_power(Cx(0.25, 0.1));
  Cx c = derive_c(g, MotionSpec::linear(LinearOperatorSpec(A2)));
  CHECK(std::abs(c - Cx(0.25, 0.1) * A2.trace()) < 1e-14);
  Vec tau = Vec::Zero(2);
  tau(0) = Cx(1.0, 0.0);
  CHECK(std::abs(derive_c(g, MotionSpec::shift(tau))) < 1e-14);
}

TEST_CASE("closed-form exponent of the boundary rule needs an adjoint eigenvector") {
  Vec tau = Vec::Zero(2);
  tau(0) = Cx(1.0, 0.0);
  Mat D = Mat::Zero(2, 2);
  D(0, 0) = Cx(2.0, 0.5);
  D(1, 1) = Cx(3.0, 0.0);
  GammaSpec g = GammaSpec::boundary_ratio_biholo(tau, 2.0);
  Cx c = derive_c(g, MotionSpec::linear(LinearOperatorSpec(D)));
  CHECK(std::abs(c - Cx(2.0, 0.5)) < 1e-12);  // 2 lambda / r with lambda = D(0,0)

  // The adjoint sends tau to the conjugate of A's first row, so a nonzero
  // off-diagonal entry in that row breaks the eigenvector requirement.
  Mat bad(2, 2);
  bad << Cx(1.0, 0.0), Cx(1.0, 0.0), Cx(0.0, 0.0), Cx(2.0, 0.0);
  CHECK_THROWS_AS((void)derive_c(g, MotionSpec::linear(LinearOperatorSpec(bad))),
                  std::invalid_argument);
}

TEST_CASE("unsupported multiplier/motion pairs are rejected") {
  GammaSpec g = GammaSpec::ratio_power(Cx(1.0, 0.0));
  CHECK_THROWS_AS((void)derive_c(g, MotionSpec::linear(
                      LinearOperatorSpec(Mat::Identity(1, 1)))),
                  std::invalid_argument);
}

TEST_CASE("derived exponent verifies against sampled evaluations") {
  Sampler sampler(SamplerConfig{.samples = 60});
  CheckReport rep = derive_c_report(GammaSpec::jacobian_power(Cx(0.5, 0.0)),
                                    MotionSpec::linear(LinearOperatorSpec(Mat::Identity(1, 1))),
                                    koebe(), unit_space(), sampler);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(rep.worst_margin >= -1e-9);
}

TEST_CASE("the slit map is starlike for the identity motion") {
  Sampler sampler(SamplerConfig{.samples = 150});
  SpirallikeClaim claim{koebe(), LinearOperatorSpec(Mat::Identity(1, 1)), short_grid()};
  CheckReport rep = check_spirallike(claim, sampler);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(rep.unknown * 20 <= rep.decided + rep.unknown);
}

TEST_CASE("the expanding motion is rejected on the slit map with a witness") {
  Sampler sampler(SamplerConfig{.samples = 150});
  SpirallikeClaim claim{koebe(), LinearOperatorSpec(-Mat::Identity(1, 1)), short_grid()};
  CheckReport rep = check_spirallike(claim, sampler);
  CHECK(rep.verdict == Verdict::violation);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->margin <= -1e-9);
  // The witness reproduces: its stored point must sit outside the image.
  Vec w(static_cast<int>(rep.witness->point.size()));
  for (int i = 0; i < w.size(); ++i) w(i) = rep.witness->point[i];
  Membership m = image_contains(koebe(), w);
  CHECK(m.state == Region::outside);
  CHECK(m.margin == doctest::Approx(rep.witness->margin).epsilon(1e-9));
}

TEST_CASE("extended spirallikeness of the classical extension") {
  Sampler sampler(SamplerConfig{.samples = 120, .t_points = 8});
  CheckReport rep = check_extended_spirallike(
      koebe(), GammaSpec::jacobian_power(Cx(0.5, 0.0)),
      LinearOperatorSpec(Mat::Identity(1, 1)),
      LinearOperatorSpec(0.5 * Mat::Identity(1, 1)), unit_space(), short_grid(), sampler);
  CHECK(rep.verdict == Verdict::pass);
}

TEST_CASE("extended check reports base-prerequisite failures as inconclusive") {
  Sampler sampler(SamplerConfig{.samples = 80});
  CheckReport rep = check_extended_spirallike(
      koebe(), GammaSpec::jacobian_power(Cx(0.5, 0.0)),
      LinearOperatorSpec(-Mat::Identity(1, 1)),
      LinearOperatorSpec(Mat::Identity(1, 1)), unit_space(), short_grid(), sampler);
  CHECK(rep.verdict == Verdict::inconclusive);
  REQUIRE(!rep.notes.empty());
}

TEST_CASE("the half-plane map is convex in the inward direction") {
  Sampler sampler(SamplerConfig{.samples = 120});
  CheckReport rep =
      check_convex_in_direction(cayley(), vec1(Cx(1.0, 0.0)), short_grid(), sampler);
  CHECK(rep.verdict == Verdict::pass);
}

TEST_CASE("the slit direction is rejected with a reproducible witness") {
  Sampler sampler(SamplerConfig{.samples = 120});
  CheckReport rep =
      check_convex_in_direction(koebe(), vec1(Cx(-1.0, 0.0)), short_grid(), sampler);
  CHECK(rep.verdict == Verdict::violation);
  REQUIRE(rep.witness.has_value());
  Vec w(static_cast<int>(rep.witness->point.size()));
  for (int i = 0; i < w.size(); ++i) w(i) = rep.witness->point[i];
  Membership m = image_contains(koebe(), w);
  CHECK(m.state == Region::outside);
  CHECK(m.margin == doctest::Approx(rep.witness->margin).epsilon(1e-9));
}

TEST_CASE("affine invariance of the jacobian-rule extension") {
  Sampler sampler(SamplerConfig{.samples = 80, .t_points = 6});
  CheckReport rep = check_affine_invariance(
      koebe(), GammaSpec::jacobian_power(Cx(0.5, 0.0)),
      LinearOperatorSpec(Mat::Identity(1, 1)), 0.8, vec1(Cx(1.0, 0.0)),
      Semigroup::catalog("identity"), unit_space(), {0.1, 0.5, 1.0}, sampler);
  CHECK(rep.verdict == Verdict::pass);
}

TEST_CASE("manifold export emits inside curves with the time column first") {
  ExtendedMap em = classic_rs(koebe());
  ProductPoint base = em({vec1(Cx(0.3, 0.0)), vec1(Cx(0.1, 0.0))});
  CurveTable table = export_invariance_manifold(
      em, MotionSpec::linear(LinearOperatorSpec(Mat::Identity(1, 1))), base,
      {0.0, 0.5, 1.0}, {0.5, 1.0});
  CHECK(table.columns.front() == "t");
  CHECK(table.columns.back() == "margin");
  CHECK(table.columns.size() == 2u + 2u * 2u);  // t, re/im per coordinate, margin
  CHECK(table.rows.size() == 6u);
  CHECK(table.worst_margin > -1e-9);
  for (const auto& row : table.rows) CHECK(row.back() > -1e-9);
}

TEST_CASE("manifold export requires an interior base point") {
  ExtendedMap em = classic_rs(koebe());
  ProductPoint off{vec1(Cx(-0.5, 0.0)), vec1(Cx(0.0, 0.0))};
  CHECK_THROWS_AS((void)export_invariance_manifold(
                      em, MotionSpec::linear(LinearOperatorSpec(Mat::Identity(1, 1))), off,
                      {0.0, 1.0}, {1.0}),
                  std::invalid_argument);
}

TEST_CASE("bloch quantities of the identity base are exact") {
  BlochBounds b = bloch_bounds(identity_map(1), GammaSpec::jacobian_power(Cx(0.5, 0.0)),
                               unit_space(), 100);
  CHECK(b.map_sup == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(b.gamma_sup == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(b.dgamma_sup == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
  CHECK(b.report.verdict == Verdict::pass);
}

TEST_CASE("bloch bound of the logarithm stays below its closed-form ceiling") {
  BlochBounds b = bloch_bounds(log_map(), GammaSpec::jacobian_power(Cx(0.5, 0.0)),
                               unit_space(), 100);
  CHECK(b.map_sup <= 2.0 + 1e-9);
  CHECK(b.map_sup >= 1.5);
  CHECK(std::isfinite(b.extended_sup));
  CHECK(b.extended_sup <= b.map_sup + b.gamma_sup + b.dgamma_sup + 1e-9);
  CHECK(b.report.verdict == Verdict::pass);
}

}  // TEST_SUITE
