#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rse/gamma.hpp"
#include "rse/holo_map.hpp"
#include "rse/report.hpp"
#include "rse/sampler.hpp"
#include "rse/space.hpp"
#include "rse/types.hpp"

namespace rse {

// Square matrix with validated spectral data. Eigenpairs are checked against
// the residual ||Av - lambda v|| <= 1e-8; accretivity is decided by the
// eigenvalue real parts, "bounded away from zero" meaning margin > 1e-10.
class LinearOperatorSpec {
 public:
  explicit LinearOperatorSpec(Mat A);

  const Mat& matrix() const { return A_; }
  int dim() const { return static_cast<int>(A_.rows()); }
  const Vec& eigenvalues() const { return eig_; }
  const Mat& eigenvectors() const { return eigvec_; }
  double accretivity_margin() const { return margin_; }
  bool accretive() const { return margin_ > 1e-10; }
  Cx trace() const { return A_.trace(); }

 private:
  Mat A_;
  Vec eig_;
  Mat eigvec_;
  double margin_ = 0.0;
};

// exp(M) by degree-13 Pade approximation with scaling and squaring.
Mat expm(const Mat& M);

// e^{-tA}.
Mat matrix_exp(const LinearOperatorSpec& A, double t);

// Eigendecomposition cross-check V e^{-t diag} V^{-1}; throws when the
// eigenvector matrix condition number exceeds 1e6.
Mat matrix_exp_eig(const LinearOperatorSpec& A, double t);

// I(t) = \int_0^t e^{-sA} ds: closed form A^{-1}(I - e^{-tA}) when
// min |eigenvalue| > 1e-10, otherwise the alternating series to 1e-14.
Mat affine_integral(const LinearOperatorSpec& A, double t);

// One-parameter semigroup of maps of a fixed dimension. Construction
// validates F_0 = id on probe points to 1e-12.
class Semigroup {
 public:
  enum class Kind { linear, affine, contraction, conjugated, catalog };

  static Semigroup linear(LinearOperatorSpec A);               // e^{-tA} z
  // e^{-tA} z + lambda (int_0^t e^{-sA} ds) tau, lambda >= 0, ||tau|| = 1.
  static Semigroup affine(LinearOperatorSpec A, double lambda, Vec tau);
  static Semigroup contraction(LinearOperatorSpec B);          // accretive B
  static Semigroup conjugated(HoloMap h, Semigroup inner);     // h^{-1} o Psi_t o h
  // 1D named flows: "exp-contraction" e^{-t} z; "koenigs" the disk flow
  // fixing 0 with generator z(1-z); "boundary-affine" 1 - e^{-t}(1-z);
  // "identity".
  static Semigroup catalog(const std::string& name);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::string& label() const { return label_; }
  // True when every time map is linear in the state (commutes with scalars).
  bool linear_in_state() const { return linear_in_state_; }
  const LinearOperatorSpec* op() const { return op_ ? op_.get() : nullptr; }

  Vec apply(double t, const Vec& z) const;
  Cx apply1(double t, Cx z) const;
  // The time-t map as a HoloMap (exact Jacobians for linear/affine kinds).
  HoloMap time_map(double t) const;

 private:
  Kind kind_ = Kind::catalog;
  int dim_ = 1;
  std::string label_;
  bool linear_in_state_ = false;
  std::shared_ptr<const LinearOperatorSpec> op_;
  double lambda_ = 0.0;
  Vec tau_;
  std::shared_ptr<const HoloMap> conj_h_;
  std::shared_ptr<const Semigroup> inner_;
  std::string catalog_name_;

  void validate_time_zero() const;
};

// Extended semigroup on the product ball:
// F~_t(x, y) = (F_t(x), GammaHat(F_t, x) G_t(y)).
struct ExtendedSemigroup {
  Semigroup base;       // on the first factor
  GammaSpec gamma_hat;  // self-map-side multiplier rule
  Semigroup g;          // on the second factor
  SpacePair space;

  Cx gamma_factor(double t, const Vec& x) const;
  ProductPoint flow(double t, const ProductPoint& pt) const;
};

ProductPoint extended_flow(const ExtendedSemigroup& ext, double t, const ProductPoint& pt);

// Conjugation of the extended flow to Omega x Y, Omega = h(D1):
// (z, w) -> (Psi_t(z), Gamma_Omega(Psi_t, z) * Gtilde_t(z, w)) with
// Gtilde_t(z, w) = c G_t(w / c), c = Gamma(h, h^{-1}(z)); the simplification
// Gtilde = G_t(w) is used when G is linear in the state.
ProductPoint conjugate_extended_flow(const HoloMap& h, const GammaSpec& gamma,
                                     const Semigroup& psi, const Semigroup& g, double t,
                                     const ProductPoint& zw);

// Difference-quotient generator estimate with first-order Richardson
// extrapolation over a decreasing t ladder.
struct GeneratorEstimate {
  Vec value;                   // extrapolated limit
  std::vector<double> t_used;
  std::vector<Vec> quotients;  // (pt - F_t(pt)) / t per ladder rung
  double order = 0.0;          // observed convergence order
};

GeneratorEstimate generator(const Semigroup& sg, const Vec& pt,
                            const std::vector<double>& t_seq);
GeneratorEstimate generator(const ExtendedSemigroup& ext, const ProductPoint& pt,
                            const std::vector<double>& t_seq);

// Stationary-set correspondence: (x, 0) is fixed by the extended flow for
// every base-stationary x (lower inclusion), and sampled fixed points of the
// extended flow project to base-stationary x (upper inclusion).
CheckReport check_stationary_sets(const ExtendedSemigroup& ext,
                                  const std::vector<Vec>& candidates,
                                  const std::vector<double>& t_grid, Sampler& sampler);

}  // namespace rse
