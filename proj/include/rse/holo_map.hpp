#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rse/types.hpp"

namespace rse {

// Exact description of the image f(domain) for catalog maps. margin(w) is a
// signed distance-like quantity: positive inside the open image, negative (or
// zero) outside it.
class ImageDescriptor {
 public:
  static ImageDescriptor disk(Cx center, double radius);
  static ImageDescriptor half_plane(Cx boundary_point, Cx inward_unit_normal);
  static ImageDescriptor slit_plane(double tip);  // C minus (-inf, tip]
  static ImageDescriptor log_region();            // image of log(1/(1-z))

  double margin(Cx w) const;
  std::string describe() const;

 private:
  enum class Kind { disk, half_plane, slit_plane, log_region };
  Kind kind_;
  Cx center_{};   // disk center / half-plane boundary point
  Cx normal_{};   // half-plane inward unit normal
  double radius_ = 0.0;  // disk radius / slit tip
};

namespace detail {
struct HoloImpl;
}

// Immutable holomorphic map: 1D on the unit disk or n-D on the unit ball,
// plus plane-domain affine pieces used as outer factors in compositions.
// Value type with shared immutable implementation.
class HoloMap {
 public:
  explicit HoloMap(std::shared_ptr<const detail::HoloImpl> impl) : impl_(std::move(impl)) {}

  int dim() const;
  // Whether eval() enforces the unit-ball domain gate.
  bool ball_domain() const;

  // Domain-gated evaluation; throws std::domain_error when gated and ||z|| >= 1.
  Vec eval(const Vec& z) const;
  Cx eval1(Cx z) const;
  // Ungated evaluation (Newton iterates, composition interiors, contours).
  Vec raw(const Vec& z) const;
  Cx raw1(Cx z) const;

  // Jacobian: closed form for catalog maps, otherwise central differences with
  // step 1e-6 * (1 + ||z||) plus one Richardson level. Never domain-gated.
  Mat jacobian(const Vec& z) const;
  Cx deriv1(Cx z) const;
  Cx jacobian_det(const Vec& z) const;

  const std::optional<ImageDescriptor>& descriptor() const;
  const std::string& label() const;

  const detail::HoloImpl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const detail::HoloImpl> impl_;
};

// 1D catalog.
HoloMap identity_map(int dim = 1);
HoloMap koebe();                        // z / (1-z)^2
HoloMap one_minus_z();                  // 1 - z
HoloMap cayley();                       // z / (1-z)
HoloMap disk_automorphism(Cx a);        // (z-a) / (1 - conj(a) z)
HoloMap half_map();                     // z / (2-z)
HoloMap hyperbolic_automorphism(double c);  // (z+c)/(1+cz), 0 < c < 1
HoloMap log_map();                      // log(1/(1-z))
HoloMap mobius(Cx a, Cx b, Cx c, Cx d); // (az+b)/(cz+d), pole off the closed disk
HoloMap affine1(Cx a, Cx b);            // a + b z on the disk
HoloMap custom1(std::string label, std::function<Cx(Cx)> f,
                std::function<Cx(Cx)> df = nullptr);

// Combinators and n-D constructions.
HoloMap scale(Cx c, const HoloMap& f);
HoloMap compose(const HoloMap& outer, const HoloMap& inner);
HoloMap coordinatewise(std::vector<HoloMap> comps);
HoloMap linear_ball_map(const Mat& M);           // ball-domain z -> Mz
HoloMap plane_affine(const Mat& M, const Vec& b);  // plane-domain z -> Mz + b
HoloMap plane_affine1(Cx scale_by, Cx shift);      // 1D plane map
HoloMap inverse_of(const HoloMap& f);              // numeric inverse via Newton

// Two distinct in-ball preimages were found where one was required.
struct NonUnivalentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Damped-Newton inversion from the standard seed grid (0 plus 8 points at
// radius 0.5). Returns the unique in-ball solution with residual <= 1e-10,
// nullopt when none converged, and throws NonUnivalentError when two in-ball
// solutions differ by more than 1e-8.
std::optional<Vec> invert(const HoloMap& f, const Vec& w);

enum class Region { inside, outside, unknown };

struct Membership {
  Region state = Region::unknown;
  double margin = 0.0;
  std::optional<Vec> preimage;
};

// Tri-state image membership: exact descriptor when available, then Newton
// inversion (|z| < 1 - 1e-6 inside, all roots beyond 1 + 1e-6 outside), then
// the 1D argument principle on contours rho in {0.9, 0.99, 0.999} with 2^12
// trapezoidal nodes.
Membership image_contains(const HoloMap& f, const Vec& w);

// Finite-difference Cauchy-Riemann residual at z (testing aid).
double cauchy_riemann_residual(const HoloMap& f, const Vec& z);

}  // namespace rse
