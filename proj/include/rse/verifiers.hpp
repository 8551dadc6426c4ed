#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rse/extension.hpp"
#include "rse/gamma.hpp"
#include "rse/holo_map.hpp"
#include "rse/report.hpp"
#include "rse/sampler.hpp"
#include "rse/semigroup.hpp"
#include "rse/space.hpp"
#include "rse/types.hpp"

namespace rse {

// Image-invariance claim: the image of the target map is carried into itself
// by the linear flow e^{-t op}. For an extended target, op acts blockwise on
// (z, w) and must have dimension n + m.
struct SpirallikeClaim {
  std::variant<HoloMap, ExtendedMap> target;
  LinearOperatorSpec op;
  std::vector<double> t_grid;
};

// Samples interior points, pushes their images along the flow, and tests
// membership at every grid time. Decided probes with margin <= -1e-9 are
// violations; > 5% unknown probes force an inconclusive verdict.
CheckReport check_spirallike(const SpirallikeClaim& claim, Sampler& sampler);

// Motion of the target space paired with a multiplier rule in derive_c.
struct MotionSpec {
  enum class Kind { linear, shift };
  Kind kind = Kind::linear;
  std::optional<LinearOperatorSpec> A;  // linear kind
  Vec tau;                              // shift kind

  static MotionSpec linear(LinearOperatorSpec A);
  static MotionSpec shift(Vec tau);
};

// Closed-form exponent C of Gamma(motion_t o h, x) = e^{-Ct} Gamma(h, x):
// jacobian-power(alpha) under linear(A) gives alpha tr A; jacobian-power
// under shift gives 0; boundary-ratio-biholo(tau, r) under linear(A) with
// A* tau = conj(lambda) tau gives 2 lambda / r; products add. Throws
// std::invalid_argument for unsupported pairs.
Cx derive_c(const GammaSpec& gamma, const MotionSpec& motion);

// Residual of the defining identity on sampled (t, x); violation when any
// residual exceeds 1e-9.
CheckReport derive_c_report(const GammaSpec& gamma, const MotionSpec& motion,
                            const HoloMap& h, const SpacePair& sp, Sampler& sampler);

// Theorem-style extension claim: h spirallike w.r.t. A on the first factor
// extends to a diag(A, B + C)-spirallike map of the product ball, C from
// derive_c. Prerequisite failures are reported as inconclusive.
CheckReport check_extended_spirallike(const HoloMap& h, const GammaSpec& gamma,
                                      const LinearOperatorSpec& A,
                                      const LinearOperatorSpec& B, const SpacePair& sp,
                                      const std::vector<double>& t_grid, Sampler& sampler);

// Convexity in a direction: image invariance under w -> w + t tau.
CheckReport check_convex_in_direction(const HoloMap& h, const Vec& tau,
                                      const std::vector<double>& t_grid, Sampler& sampler);

// Extended variant: containment of the curve (z + t tau, e^{-(B+C)t} w).
CheckReport check_convex_in_direction(const ExtendedMap& em, const Vec& tau,
                                      const Mat& b_plus_c, const std::vector<double>& t_grid,
                                      Sampler& sampler);

// Affine-group invariance of the extended image: the curve
// (Psi_t(z), e^{-Ct} G_t(w)) stays in the image of the extension, where
// Psi_t(z) = e^{-tA} z + lambda (int_0^t e^{-sA} ds) tau.
CheckReport check_affine_invariance(const HoloMap& h, const GammaSpec& gamma,
                                    const LinearOperatorSpec& A, double lambda,
                                    const Vec& tau, const Semigroup& g, const SpacePair& sp,
                                    const std::vector<double>& t_grid, Sampler& sampler);

// Figure-data table: rows are (t, coordinates..., membership margin).
struct CurveTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  double worst_margin = 0.0;
};

// Emits the invariance manifold through (z0, w0): linear motion gives the
// spiral fan (e^{-At} z0, s e^{-Re(C) t} |w0|), s in the fan; shift motion
// gives the cylinder (z0 + t tau, s |w0|). Throws std::invalid_argument when
// the base point is not inside the image.
CurveTable export_invariance_manifold(const ExtendedMap& em, const MotionSpec& motion,
                                      const ProductPoint& base,
                                      const std::vector<double>& t_grid,
                                      const std::vector<double>& fan);

// Bloch-type suprema on a deterministic grid: (i) ||h'(x)|| (1 - ||x||^2),
// (ii) |Gamma(h,x)| (1 - ||x||^2), (iii) ||d_x Gamma|| p(||x||)(1 - ||x||^2),
// and the extended quantity ||Phi[h]'(x,y)|| (1 - ||(x,y)||^2) with the
// operator norm estimated over random unit directions. The report asserts
// extended <= (i) + (ii) + (iii) + 1e-9.
struct BlochBounds {
  double map_sup = 0.0;
  double gamma_sup = 0.0;
  double dgamma_sup = 0.0;
  double extended_sup = 0.0;
  CheckReport report;
};

BlochBounds bloch_bounds(const HoloMap& h, const GammaSpec& gamma, const SpacePair& sp,
                         int grid_points);

}  // namespace rse
