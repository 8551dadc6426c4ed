#pragma once

#include <complex>

#include <Eigen/Dense>

namespace rse {

using Cx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline Vec vec1(Cx z) {
  Vec v(1);
  v(0) = z;
  return v;
}

// Hermitian pairing <u, tau> = sum_i u_i conj(tau_i), linear in u.
inline Cx pair_with(const Vec& u, const Vec& tau) { return (tau.adjoint() * u)(0); }

}  // namespace rse
