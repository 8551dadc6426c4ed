#include "rse/profile.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rse {
namespace {

constexpr int kGrid = 1000;
constexpr double kTol = 1e-12;

}  // namespace

Profile::Profile(double q, double r) : power_(true), q_(q), r_(r) {
  if (!(q >= 1.0) || !(r >= 1.0)) {
    throw std::invalid_argument("profile exponents must satisfy q >= 1, r >= 1");
  }
  // Admissibility (endpoints, strict decrease, concavity) holds for every
  // power profile with q, r >= 1; no sampling needed.
  eval_ = [q, r](double s) { return std::pow(1.0 - std::pow(s, q), 1.0 / r); };
}

Profile::Profile(std::function<double(double)> p) : eval_(std::move(p)) {
  if (!eval_) throw std::invalid_argument("profile evaluator is empty");
  validate();
}

double Profile::operator()(double s) const {
  if (!(s >= 0.0) || !(s <= 1.0)) {
    throw std::domain_error("profile argument outside [0,1]");
  }
  return eval_(s);
}

void Profile::validate() const {
  std::vector<double> v(kGrid + 1);
  for (int k = 0; k <= kGrid; ++k) v[k] = eval_(static_cast<double>(k) / kGrid);
  if (std::abs(v[0] - 1.0) > kTol || std::abs(v[kGrid]) > kTol) {
    throw std::invalid_argument("profile must satisfy p(0)=1, p(1)=0");
  }
  // No increase anywhere, and a strict drop over every 5% window. The window
  // absorbs plateaus below grid resolution without admitting truly flat runs.
  for (int k = 1; k <= kGrid; ++k) {
    if (v[k] > v[k - 1] + kTol) {
      throw std::invalid_argument("profile must be strictly decreasing");
    }
  }
  for (int k = 50; k <= kGrid; ++k) {
    if (!(v[k] < v[k - 50])) {
      throw std::invalid_argument("profile must be strictly decreasing");
    }
  }
  // Midpoint concavity over all grid pairs whose midpoint lies on the grid.
  for (int i = 0; i <= kGrid; ++i) {
    for (int j = i + 2; j <= kGrid; j += 2) {
      if (v[(i + j) / 2] < 0.5 * (v[i] + v[j]) - kTol) {
        throw std::invalid_argument("profile must be midpoint-concave");
      }
    }
  }
}

}  // namespace rse
