#include "rse/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rse/branch.hpp"

namespace rse {

// ---------------------------------------------------------------------------
// LinearOperatorSpec

LinearOperatorSpec::LinearOperatorSpec(Mat A) : A_(std::move(A)) {
  if (A_.rows() != A_.cols() || A_.rows() < 1) {
    throw std::invalid_argument("operator matrix must be square and nonempty");
  }
  Eigen::ComplexEigenSolver<Mat> es(A_);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }
  eig_ = es.eigenvalues();
  eigvec_ = es.eigenvectors();
  margin_ = std::numeric_limits<double>::infinity();
  for (int k = 0; k < eig_.size(); ++k) {
    Vec v = eigvec_.col(k);
    double resid = (A_ * v - eig_(k) * v).norm();
    if (resid > 1e-8) throw std::runtime_error("eigenpair residual exceeds 1e-8");
    margin_ = std::min(margin_, eig_(k).real());
  }
}

// ---------------------------------------------------------------------------
// Matrix exponential: Pade approximants with scaling and squaring, degree
// chosen by the 1-norm thresholds of the standard backward-error analysis.

namespace {

double norm1(const Mat& A) { return A.cwiseAbs().colwise().sum().maxCoeff(); }

Mat pade_solve(const Mat& U, const Mat& V) {
  return Eigen::PartialPivLU<Mat>(V - U).solve(V + U);
}

Mat expm_pade_low(const Mat& A, const std::vector<double>& b) {
  const auto n = A.rows();
  const Mat I = Mat::Identity(n, n);
  Mat A2 = A * A;
  Mat U = b[1] * I;
  Mat V = b[0] * I;
  Mat P = I;
  for (std::size_t k = 2; k < b.size(); k += 2) {
    P = P * A2;  // A^{k}
    V += b[k] * P;
    if (k + 1 < b.size()) U += b[k + 1] * P;
  }
  U = A * U;
  return pade_solve(U, V);
}

Mat expm_pade13(const Mat& A) {
  static const double b[14] = {64764752532480000.0,
                               32382376266240000.0,
                               7771770303897600.0,
                               1187353796428800.0,
                               129060195264000.0,
                               10559470521600.0,
                               670442572800.0,
                               33522128640.0,
                               1323241920.0,
                               40840800.0,
                               960960.0,
                               16380.0,
                               182.0,
                               1.0};
  const auto n = A.rows();
  const Mat I = Mat::Identity(n, n);
  Mat A2 = A * A;
  Mat A4 = A2 * A2;
  Mat A6 = A4 * A2;
  Mat U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 +
               b[3] * A2 + b[1] * I);
  Mat V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 +
          b[0] * I;
  return pade_solve(U, V);
}

}  // namespace

Mat expm(const Mat& M) {
  static const std::vector<double> b3 = {120, 60, 12, 1};
  static const std::vector<double> b5 = {30240, 15120, 3360, 420, 30, 1};
  static const std::vector<double> b7 = {17297280, 8648640, 1995840, 277200,
                                         25200,    1512,    56,      1};
  static const std::vector<double> b9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                         302702400.0,   30270240.0,   2162160.0,
                                         110880.0,      3960.0,       90.0,
                                         1.0};
  const double theta3 = 1.495585217958292e-2;
  const double theta5 = 2.539398330063230e-1;
  const double theta7 = 9.504178996162932e-1;
  const double theta9 = 2.097847961257068;
  const double theta13 = 5.371920351148152;

  double nrm = norm1(M);
  if (nrm <= theta3) return expm_pade_low(M, b3);
  if (nrm <= theta5) return expm_pade_low(M, b5);
  if (nrm <= theta7) return expm_pade_low(M, b7);
  if (nrm <= theta9) return expm_pade_low(M, b9);
  int s = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / theta13))));
  Mat F = expm_pade13(M / std::pow(2.0, s));
  for (int k = 0; k < s; ++k) F = F * F;
  return F;
}

Mat matrix_exp(const LinearOperatorSpec& A, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("matrix_exp: t must be >= 0");
  return expm((-t * A.matrix()).eval());
}

Mat matrix_exp_eig(const LinearOperatorSpec& A, double t) {
  const Mat& V = A.eigenvectors();
  Eigen::JacobiSVD<Mat> svd(V);
  double smin = svd.singularValues().minCoeff();
  double smax = svd.singularValues().maxCoeff();
  if (!(smin > 0.0) || smax / smin >= 1e6) {
    throw std::runtime_error("eigenvector matrix too ill-conditioned for cross-check");
  }
  Vec d = (-t * A.eigenvalues()).array().exp();
  return V * d.asDiagonal() * V.inverse();
}

Mat affine_integral(const LinearOperatorSpec& A, double t) {
  const auto n = A.dim();
  double min_abs = A.eigenvalues().cwiseAbs().minCoeff();
  if (min_abs > 1e-10) {
    Mat rhs = Mat::Identity(n, n) - matrix_exp(A, t);
    return Eigen::PartialPivLU<Mat>(A.matrix()).solve(rhs);
  }
  // Alternating series sum_k (-1)^k t^{k+1} A^k / (k+1)!.
  Mat term = t * Mat::Identity(n, n);
  Mat sum = term;
  for (int k = 1; k < 200; ++k) {
    term = term * ((-t / (k + 1)) * A.matrix());
    sum += term;
    if (norm1(term) <= 1e-14 * std::max(1.0, norm1(sum))) break;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Semigroup

Semigroup Semigroup::linear(LinearOperatorSpec A) {
  Semigroup s;
  s.kind_ = Kind::linear;
  s.dim_ = A.dim();
  s.linear_in_state_ = true;
  s.label_ = "linear-flow(" + std::to_string(A.dim()) + "d)";
  s.op_ = std::make_shared<LinearOperatorSpec>(std::move(A));
  s.validate_time_zero();
  return s;
}

Semigroup Semigroup::affine(LinearOperatorSpec A, double lambda, Vec tau) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("affine semigroup needs lambda >= 0");
  if (tau.size() != A.dim() || std::abs(tau.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("affine semigroup needs a unit tau of matching dimension");
  }
  Semigroup s;
  s.kind_ = Kind::affine;
  s.dim_ = A.dim();
  s.linear_in_state_ = lambda == 0.0;
  s.label_ = "affine-flow(" + std::to_string(A.dim()) + "d)";
  s.op_ = std::make_shared<LinearOperatorSpec>(std::move(A));
  s.lambda_ = lambda;
  s.tau_ = std::move(tau);
  s.validate_time_zero();
  return s;
}

Semigroup Semigroup::contraction(LinearOperatorSpec B) {
  if (B.accretivity_margin() < 0.0) {
    throw std::invalid_argument("contraction semigroup needs an accretive generator");
  }
  Semigroup s;
  s.kind_ = Kind::contraction;
  s.dim_ = B.dim();
  s.linear_in_state_ = true;
  s.label_ = "contraction-flow(" + std::to_string(B.dim()) + "d)";
  s.op_ = std::make_shared<LinearOperatorSpec>(std::move(B));
  s.validate_time_zero();
  return s;
}

Semigroup Semigroup::conjugated(HoloMap h, Semigroup inner) {
  if (h.dim() != inner.dim()) {
    throw std::invalid_argument("conjugation dimensions do not match");
  }
  Semigroup s;
  s.kind_ = Kind::conjugated;
  s.dim_ = inner.dim();
  s.linear_in_state_ = false;
  s.label_ = "conjugated(" + h.label() + "," + inner.label() + ")";
  s.conj_h_ = std::make_shared<HoloMap>(std::move(h));
  s.inner_ = std::make_shared<Semigroup>(std::move(inner));
  s.validate_time_zero();
  return s;
}

Semigroup Semigroup::catalog(const std::string& name) {
  Semigroup s;
  s.kind_ = Kind::catalog;
  s.dim_ = 1;
  s.catalog_name_ = name;
  s.label_ = "catalog(" + name + ")";
  if (name == "exp-contraction" || name == "identity") {
    s.linear_in_state_ = true;
  } else if (name == "koenigs" || name == "boundary-affine") {
    s.linear_in_state_ = false;
  } else {
    throw std::invalid_argument("unknown catalog flow: " + name);
  }
  s.validate_time_zero();
  return s;
}

Vec Semigroup::apply(double t, const Vec& z) const {
  if (!(t >= 0.0)) throw std::invalid_argument("semigroup time must be >= 0");
  switch (kind_) {
    case Kind::linear:
    case Kind::contraction:
      return matrix_exp(*op_, t) * z;
    case Kind::affine:
      return matrix_exp(*op_, t) * z + Cx(lambda_, 0.0) * (affine_integral(*op_, t) * tau_);
    case Kind::conjugated: {
      Vec w = inner_->apply(t, conj_h_->raw(z));
      auto back = invert(*conj_h_, w);
      if (!back) {
        throw std::runtime_error("conjugated flow left the image domain (invariance fails)");
      }
      return *back;
    }
    case Kind::catalog: {
      Cx x = z(0);
      double e = std::exp(-t);
      if (catalog_name_ == "exp-contraction") return vec1(e * x);
      if (catalog_name_ == "identity") return vec1(x);
      if (catalog_name_ == "koenigs") return vec1(e * x / (Cx(1.0, 0.0) - (1.0 - e) * x));
      return vec1(Cx(1.0 - e, 0.0) + e * x);  // boundary-affine
    }
  }
  throw std::logic_error("unreachable semigroup kind");
}

Cx Semigroup::apply1(double t, Cx z) const { return apply(t, vec1(z))(0); }

HoloMap Semigroup::time_map(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("semigroup time must be >= 0");
  switch (kind_) {
    case Kind::linear:
    case Kind::contraction:
      return plane_affine(matrix_exp(*op_, t), Vec::Zero(dim_));
    case Kind::affine:
      return plane_affine(matrix_exp(*op_, t),
                          (Cx(lambda_, 0.0) * (affine_integral(*op_, t) * tau_)).eval());
    case Kind::conjugated:
      return compose(inverse_of(*conj_h_), compose(inner_->time_map(t), *conj_h_));
    case Kind::catalog: {
      double e = std::exp(-t);
      if (catalog_name_ == "exp-contraction") return plane_affine1(Cx(e, 0.0), Cx(0.0, 0.0));
      if (catalog_name_ == "identity") return identity_map(1);
      if (catalog_name_ == "koenigs") {
        return mobius(Cx(e, 0.0), Cx(0.0, 0.0), Cx(e - 1.0, 0.0), Cx(1.0, 0.0));
      }
      return affine1(Cx(1.0 - e, 0.0), Cx(e, 0.0));  // boundary-affine
    }
  }
  throw std::logic_error("unreachable semigroup kind");
}

void Semigroup::validate_time_zero() const {
  for (double mag : {0.2, 0.55, 0.85}) {
    Vec z = Vec::Constant(dim_, Cx(mag / std::sqrt(2.0 * dim_), mag / std::sqrt(2.0 * dim_)));
    if ((apply(0.0, z) - z).norm() > 1e-12) {
      throw std::runtime_error("semigroup violates F_0 = id");
    }
  }
}

// ---------------------------------------------------------------------------
// Extended semigroup

Cx ExtendedSemigroup::gamma_factor(double t, const Vec& x) const {
  return gamma_eval(gamma_hat, base.time_map(t), x);
}

ProductPoint ExtendedSemigroup::flow(double t, const ProductPoint& pt) const {
  ProductPoint out;
  out.x = base.apply(t, pt.x);
  out.y = gamma_factor(t, pt.x) * g.apply(t, pt.y);
  return out;
}

ProductPoint extended_flow(const ExtendedSemigroup& ext, double t, const ProductPoint& pt) {
  return ext.flow(t, pt);
}

ProductPoint conjugate_extended_flow(const HoloMap& h, const GammaSpec& gamma,
                                     const Semigroup& psi, const Semigroup& g, double t,
                                     const ProductPoint& zw) {
  auto u = invert(h, zw.x);
  if (!u) throw std::runtime_error("conjugate_extended_flow: point not in h(D1)");
  Cx c = gamma_eval(gamma, h, *u);
  HoloMap psi_t = psi.time_map(t);
  Cx gamma_omega_val = gamma_eval(gamma, compose(psi_t, h), *u) / c;
  Vec gtilde;
  if (g.linear_in_state()) {
    gtilde = g.apply(t, zw.y);
  } else {
    gtilde = c * g.apply(t, (zw.y / c).eval());
  }
  ProductPoint out;
  out.x = psi.apply(t, zw.x);
  out.y = gamma_omega_val * gtilde;
  return out;
}

// ---------------------------------------------------------------------------
// Generator estimation

namespace {

GeneratorEstimate generator_impl(const std::function<Vec(double)>& flow_at, const Vec& pt,
                                 const std::vector<double>& t_seq) {
  if (t_seq.size() < 2) throw std::invalid_argument("generator needs at least two t values");
  for (std::size_t i = 0; i < t_seq.size(); ++i) {
    if (!(t_seq[i] > 0.0) || (i && !(t_seq[i] < t_seq[i - 1]))) {
      throw std::invalid_argument("generator needs a decreasing positive t ladder");
    }
  }
  GeneratorEstimate est;
  est.t_used = t_seq;
  for (double t : t_seq) {
    est.quotients.push_back(((pt - flow_at(t)) / t).eval());
  }
  // First-order Richardson on the two finest rungs: q(t) ~ L + c t.
  std::size_t k = t_seq.size() - 1;
  double t1 = t_seq[k - 1], t2 = t_seq[k];
  est.value = ((t1 * est.quotients[k] - t2 * est.quotients[k - 1]) / (t1 - t2)).eval();
  // Observed order from the finest consecutive-difference pair.
  if (t_seq.size() >= 3) {
    double d1 = (est.quotients[k - 1] - est.quotients[k - 2]).norm();
    double d2 = (est.quotients[k] - est.quotients[k - 1]).norm();
    double scale = 1.0 + est.quotients[k].norm();
    if (d2 <= 1e-15 * scale) {
      est.order = 99.0;  // differences at rounding level: effectively exact
    } else {
      est.order = std::log(d1 / d2) / std::log(t_seq[k - 2] / t_seq[k - 1]);
    }
  }
  return est;
}

}  // namespace

GeneratorEstimate generator(const Semigroup& sg, const Vec& pt,
                            const std::vector<double>& t_seq) {
  return generator_impl([&](double t) { return sg.apply(t, pt); }, pt, t_seq);
}

GeneratorEstimate generator(const ExtendedSemigroup& ext, const ProductPoint& pt,
                            const std::vector<double>& t_seq) {
  const auto n = pt.x.size();
  const auto m = pt.y.size();
  Vec joint(n + m);
  joint << pt.x, pt.y;
  auto flow_at = [&](double t) {
    ProductPoint q = ext.flow(t, pt);
    Vec out(n + m);
    out << q.x, q.y;
    return out;
  };
  return generator_impl(flow_at, joint, t_seq);
}

// ---------------------------------------------------------------------------
// Stationary sets

CheckReport check_stationary_sets(const ExtendedSemigroup& ext,
                                  const std::vector<Vec>& candidates,
                                  const std::vector<double>& t_grid, Sampler& sampler) {
  CheckReport rep;
  rep.check = "stationary-sets";
  {
    nlohmann::json j;
    j["candidates"] = candidates.size();
    j["t_grid"] = t_grid;
    j["gamma"] = ext.gamma_hat.describe();
    rep.params = j.dump();
  }
  bool violated = false;
  double worst = 0.0;

  for (const auto& x : candidates) {
    // Precondition: x stationary for the base flow.
    double base_dev = 0.0;
    for (double t : t_grid) base_dev = std::max(base_dev, (ext.base.apply(t, x) - x).norm());
    if (base_dev > 1e-10) {
      rep.notes.push_back("candidate is not base-stationary (skipped)");
      ++rep.unknown;
      continue;
    }
    // Lower inclusion: (x, 0) fixed by the extended flow.
    ProductPoint pt{x, Vec::Zero(ext.space.m)};
    for (double t : t_grid) {
      ProductPoint q = ext.flow(t, pt);
      double dev = std::max((q.x - x).norm(), q.y.norm());
      worst = std::max(worst, dev);
      if (dev > 1e-9) {
        violated = true;
        if (!rep.witness) {
          Witness w;
          w.point.assign(x.data(), x.data() + x.size());
          w.t = t;
          w.margin = -dev;
          rep.witness = w;
          rep.notes.push_back("(x, 0) moved under the extended flow");
        }
      }
      ++rep.decided;
    }
  }

  // Upper inclusion on samples: extended-fixed points project to
  // base-stationary first coordinates.
  for (int i = 0; i < 64; ++i) {
    ProductPoint pt = sampler.product_point(ext.space);
    double ext_dev = 0.0;
    for (double t : t_grid) {
      ProductPoint q = ext.flow(t, pt);
      Vec dx = q.x - pt.x;
      Vec dy = q.y - pt.y;
      ext_dev = std::max(ext_dev, std::max(dx.norm(), dy.norm()));
      if (ext_dev > 1e-10) break;
    }
    if (ext_dev <= 1e-10) {
      double base_dev = 0.0;
      for (double t : t_grid) {
        base_dev = std::max(base_dev, (ext.base.apply(t, pt.x) - pt.x).norm());
      }
      if (base_dev > 1e-9) {
        violated = true;
        if (!rep.witness) {
          Witness w;
          w.point.assign(pt.x.data(), pt.x.data() + pt.x.size());
          w.margin = -base_dev;
          rep.witness = w;
          rep.notes.push_back("extended-fixed sample is not base-stationary");
        }
      }
    }
    ++rep.decided;
  }

  rep.worst_margin = -worst;
  rep.verdict = standard_verdict(rep.decided, rep.unknown, rep.worst_margin, violated);
  return rep;
}

}  // namespace rse
