#include "rse/holo_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

namespace rse {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kEdge = 1e-6;       // boundary band half-width for inversion verdicts
constexpr double kNewtonTol = 1e-10;
constexpr double kRootAgree = 1e-8;
}  // namespace

// ---------------------------------------------------------------------------
// ImageDescriptor

ImageDescriptor ImageDescriptor::disk(Cx center, double radius) {
  ImageDescriptor d;
  d.kind_ = Kind::disk;
  d.center_ = center;
  d.radius_ = radius;
  return d;
}

ImageDescriptor ImageDescriptor::half_plane(Cx boundary_point, Cx inward_unit_normal) {
  ImageDescriptor d;
  d.kind_ = Kind::half_plane;
  d.center_ = boundary_point;
  d.normal_ = inward_unit_normal / std::abs(inward_unit_normal);
  return d;
}

ImageDescriptor ImageDescriptor::slit_plane(double tip) {
  ImageDescriptor d;
  d.kind_ = Kind::slit_plane;
  d.radius_ = tip;
  return d;
}

ImageDescriptor ImageDescriptor::log_region() {
  ImageDescriptor d;
  d.kind_ = Kind::log_region;
  return d;
}

double ImageDescriptor::margin(Cx w) const {
  switch (kind_) {
    case Kind::disk:
      return radius_ - std::abs(w - center_);
    case Kind::half_plane:
      return (std::conj(normal_) * (w - center_)).real();
    case Kind::slit_plane: {
      // Distance to the ray (-inf, tip]; points exactly on the slit get the
      // (negative) depth past the tip so that crossings register as
      // violations rather than zero-margin boundary hits.
      if (w.real() >= radius_) return std::abs(w - Cx(radius_, 0.0));
      double d = std::abs(w.imag());
      return d > 0.0 ? d : w.real() - radius_;
    }
    case Kind::log_region: {
      // {u+iv : |v| < pi/2, u > -log(2 cos v)}.
      double band = 0.5 * kPi - std::abs(w.imag());
      if (band <= 0.0) return band;
      return std::min(band, w.real() + std::log(2.0 * std::cos(w.imag())));
    }
  }
  return 0.0;
}

std::string ImageDescriptor::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::disk:
      os << "disk(center=" << center_ << ", radius=" << radius_ << ")";
      break;
    case Kind::half_plane:
      os << "half-plane(through=" << center_ << ", normal=" << normal_ << ")";
      break;
    case Kind::slit_plane:
      os << "plane minus (-inf," << radius_ << "]";
      break;
    case Kind::log_region:
      os << "log-region";
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Implementations

namespace detail {

struct HoloImpl {
  virtual ~HoloImpl() = default;
  virtual int dim() const = 0;
  virtual Vec eval(const Vec& z) const = 0;
  virtual Mat jac(const Vec& z) const;
  virtual bool ball_domain() const { return true; }

  std::optional<ImageDescriptor> desc;
  std::string label;
};

namespace {

// Central differences with one Richardson level, per input coordinate.
Mat fd_jacobian(const HoloImpl& f, const Vec& z) {
  const int n = f.dim();
  const double h = 1e-6 * (1.0 + z.norm());
  Mat J(n, n);
  auto col = [&](int j, double step) {
    Vec e = Vec::Zero(n);
    e(j) = Cx(step, 0.0);
    return ((f.eval(z + e) - f.eval(z - e)) / Cx(2.0 * step, 0.0)).eval();
  };
  for (int j = 0; j < n; ++j) {
    Vec d1 = col(j, h);
    Vec d2 = col(j, 0.5 * h);
    J.col(j) = (4.0 * d2 - d1) / 3.0;
  }
  return J;
}

}  // namespace

Mat HoloImpl::jac(const Vec& z) const { return fd_jacobian(*this, z); }

namespace {

struct MobiusImpl final : HoloImpl {
  Cx a, b, c, d;
  MobiusImpl(Cx a_, Cx b_, Cx c_, Cx d_) : a(a_), b(b_), c(c_), d(d_) {}
  int dim() const override { return 1; }
  Vec eval(const Vec& z) const override { return vec1((a * z(0) + b) / (c * z(0) + d)); }
  Mat jac(const Vec& z) const override {
    Cx den = c * z(0) + d;
    Mat J(1, 1);
    J(0, 0) = (a * d - b * c) / (den * den);
    return J;
  }
};

struct KoebeImpl final : HoloImpl {
  int dim() const override { return 1; }
  Vec eval(const Vec& z) const override {
    Cx u = Cx(1.0, 0.0) - z(0);
    return vec1(z(0) / (u * u));
  }
  Mat jac(const Vec& z) const override {
    Cx u = Cx(1.0, 0.0) - z(0);
    Mat J(1, 1);
    J(0, 0) = (Cx(1.0, 0.0) + z(0)) / (u * u * u);
    return J;
  }
};

struct LogMapImpl final : HoloImpl {
  int dim() const override { return 1; }
  Vec eval(const Vec& z) const override { return vec1(-std::log(Cx(1.0, 0.0) - z(0))); }
  Mat jac(const Vec& z) const override {
    Mat J(1, 1);
    J(0, 0) = Cx(1.0, 0.0) / (Cx(1.0, 0.0) - z(0));
    return J;
  }
};

struct AffineImpl final : HoloImpl {
  Mat M;
  Vec b;
  bool gate;
  AffineImpl(Mat M_, Vec b_, bool gate_) : M(std::move(M_)), b(std::move(b_)), gate(gate_) {}
  int dim() const override { return static_cast<int>(M.rows()); }
  Vec eval(const Vec& z) const override { return M * z + b; }
  Mat jac(const Vec&) const override { return M; }
  bool ball_domain() const override { return gate; }
};

struct ScaleImpl final : HoloImpl {
  Cx c;
  HoloMap f;
  ScaleImpl(Cx c_, HoloMap f_) : c(c_), f(std::move(f_)) {}
  int dim() const override { return f.dim(); }
  Vec eval(const Vec& z) const override { return c * f.raw(z); }
  Mat jac(const Vec& z) const override { return c * f.jacobian(z); }
  bool ball_domain() const override { return f.ball_domain(); }
};

struct ComposeImpl final : HoloImpl {
  HoloMap outer, inner;
  ComposeImpl(HoloMap o, HoloMap i) : outer(std::move(o)), inner(std::move(i)) {}
  int dim() const override { return inner.dim(); }
  Vec eval(const Vec& z) const override { return outer.raw(inner.raw(z)); }
  Mat jac(const Vec& z) const override {
    return outer.jacobian(inner.raw(z)) * inner.jacobian(z);
  }
  bool ball_domain() const override { return inner.ball_domain(); }
};

struct CoordwiseImpl final : HoloImpl {
  std::vector<HoloMap> comps;
  explicit CoordwiseImpl(std::vector<HoloMap> c) : comps(std::move(c)) {}
  int dim() const override { return static_cast<int>(comps.size()); }
  Vec eval(const Vec& z) const override {
    Vec out(dim());
    for (int i = 0; i < dim(); ++i) out(i) = comps[i].raw1(z(i));
    return out;
  }
  Mat jac(const Vec& z) const override {
    Mat J = Mat::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i) J(i, i) = comps[i].deriv1(z(i));
    return J;
  }
};

struct CustomImpl final : HoloImpl {
  std::function<Cx(Cx)> f;
  std::function<Cx(Cx)> df;
  int dim() const override { return 1; }
  Vec eval(const Vec& z) const override { return vec1(f(z(0))); }
  Mat jac(const Vec& z) const override {
    if (!df) return HoloImpl::jac(z);
    Mat J(1, 1);
    J(0, 0) = df(z(0));
    return J;
  }
};

struct InverseImpl final : HoloImpl {
  HoloMap fwd;
  explicit InverseImpl(HoloMap f) : fwd(std::move(f)) {}
  int dim() const override { return fwd.dim(); }
  Vec eval(const Vec& w) const override {
    auto z = invert(fwd, w);
    if (!z) throw std::runtime_error("inverse evaluation failed: Newton found no preimage");
    return *z;
  }
  Mat jac(const Vec& w) const override {
    Vec z = eval(w);
    return fwd.jacobian(z).partialPivLu().inverse();
  }
  bool ball_domain() const override { return false; }
};

}  // namespace
}  // namespace detail

// ---------------------------------------------------------------------------
// HoloMap surface

int HoloMap::dim() const { return impl_->dim(); }
bool HoloMap::ball_domain() const { return impl_->ball_domain(); }

Vec HoloMap::eval(const Vec& z) const {
  if (impl_->ball_domain() && !(z.norm() < 1.0)) {
    throw std::domain_error("map argument outside the open unit ball");
  }
  return impl_->eval(z);
}

Cx HoloMap::eval1(Cx z) const { return eval(vec1(z))(0); }
Vec HoloMap::raw(const Vec& z) const { return impl_->eval(z); }
Cx HoloMap::raw1(Cx z) const { return impl_->eval(vec1(z))(0); }
Mat HoloMap::jacobian(const Vec& z) const { return impl_->jac(z); }
Cx HoloMap::deriv1(Cx z) const { return impl_->jac(vec1(z))(0, 0); }

Cx HoloMap::jacobian_det(const Vec& z) const {
  if (dim() == 1) return deriv1(z(0));
  return impl_->jac(z).determinant();
}

const std::optional<ImageDescriptor>& HoloMap::descriptor() const { return impl_->desc; }
const std::string& HoloMap::label() const { return impl_->label; }

// ---------------------------------------------------------------------------
// Catalog factories

namespace {

using detail::HoloImpl;

// Image of the unit disk under (az+b)/(cz+d): a disk when the pole lies off
// the closed unit circle, a half-plane when the pole sits on it.
std::optional<ImageDescriptor> mobius_descriptor(Cx a, Cx b, Cx c, Cx d) {
  auto f = [&](Cx z) { return (a * z + b) / (c * z + d); };
  bool on_circle = false;
  if (std::abs(c) > 0.0) {
    double pr = std::abs(-d / c);
    if (std::abs(pr - 1.0) <= 1e-9) on_circle = true;
  }
  // Boundary probes ranked by distance from the pole (largest denominators).
  std::vector<Cx> zs;
  for (int k = 0; k < 8; ++k) zs.push_back(std::polar(1.0, 2.0 * kPi * k / 8.0));
  std::sort(zs.begin(), zs.end(),
            [&](Cx u, Cx v) { return std::abs(c * u + d) > std::abs(c * v + d); });
  Cx P = f(zs[0]), Q = f(zs[1]), R = f(zs[2]);
  if (on_circle) {
    Cx dir = Q - P;
    Cx n = Cx(0.0, 1.0) * dir / std::abs(dir);
    Cx w0 = b / d;  // image of the origin lies strictly inside
    if ((std::conj(n) * (w0 - P)).real() < 0.0) n = -n;
    return ImageDescriptor::half_plane(P, n);
  }
  // Circumcenter of P, Q, R.
  Cx u = P - R, v = Q - R;
  double det = (std::conj(u) * v).imag();
  if (std::abs(det) < 1e-12 * (std::abs(u) * std::abs(v) + 1e-300)) return std::nullopt;
  double hu = 0.5 * std::norm(u), hv = 0.5 * std::norm(v);
  double u1 = u.real(), u2 = u.imag(), v1 = v.real(), v2 = v.imag();
  double den = u1 * v2 - u2 * v1;
  double x1 = (hu * v2 - hv * u2) / den;
  double x2 = (u1 * hv - v1 * hu) / den;
  Cx center = R + Cx(x1, x2);
  double radius = (std::abs(P - center) + std::abs(Q - center) + std::abs(R - center)) / 3.0;
  return ImageDescriptor::disk(center, radius);
}

HoloMap make_mobius(Cx a, Cx b, Cx c, Cx d, std::string label) {
  if (std::abs(a * d - b * c) < 1e-300) {
    throw std::invalid_argument("mobius map is degenerate (ad - bc = 0)");
  }
  if (std::abs(c) > 0.0 && std::abs(-d / c) < 1.0 - 1e-12) {
    throw std::invalid_argument("mobius pole lies inside the unit disk");
  }
  auto impl = std::make_shared<detail::MobiusImpl>(a, b, c, d);
  impl->desc = mobius_descriptor(a, b, c, d);
  impl->label = std::move(label);
  return HoloMap(impl);
}

}  // namespace

HoloMap identity_map(int dim) {
  if (dim < 1) throw std::invalid_argument("identity_map needs dim >= 1");
  if (dim == 1) return make_mobius(1.0, 0.0, 0.0, 1.0, "identity");
  auto impl = std::make_shared<detail::AffineImpl>(Mat::Identity(dim, dim), Vec::Zero(dim), true);
  impl->label = "identity";
  return HoloMap(impl);
}

HoloMap koebe() {
  auto impl = std::make_shared<detail::KoebeImpl>();
  impl->desc = ImageDescriptor::slit_plane(-0.25);
  impl->label = "koebe";
  return HoloMap(impl);
}

HoloMap one_minus_z() { return make_mobius(-1.0, 1.0, 0.0, 1.0, "one-minus-z"); }

HoloMap cayley() { return make_mobius(1.0, 0.0, -1.0, 1.0, "cayley"); }

HoloMap disk_automorphism(Cx a) {
  if (!(std::abs(a) < 1.0)) throw std::invalid_argument("disk automorphism needs |a| < 1");
  return make_mobius(1.0, -a, -std::conj(a), 1.0, "disk-automorphism");
}

HoloMap half_map() { return make_mobius(1.0, 0.0, -1.0, 2.0, "half-map"); }

HoloMap hyperbolic_automorphism(double c) {
  if (!(c > 0.0 && c < 1.0)) {
    throw std::invalid_argument("hyperbolic automorphism needs 0 < c < 1");
  }
  return make_mobius(1.0, c, c, 1.0, "hyperbolic-automorphism");
}

HoloMap log_map() {
  auto impl = std::make_shared<detail::LogMapImpl>();
  impl->desc = ImageDescriptor::log_region();
  impl->label = "log-map";
  return HoloMap(impl);
}

HoloMap mobius(Cx a, Cx b, Cx c, Cx d) {
  std::ostringstream os;
  os << "mobius(" << a << "," << b << "," << c << "," << d << ")";
  return make_mobius(a, b, c, d, os.str());
}

HoloMap affine1(Cx a, Cx b) {
  std::ostringstream os;
  os << "affine(" << a << "+" << b << "z)";
  return make_mobius(b, a, 0.0, 1.0, os.str());
}

HoloMap custom1(std::string label, std::function<Cx(Cx)> f, std::function<Cx(Cx)> df) {
  auto impl = std::make_shared<detail::CustomImpl>();
  impl->f = std::move(f);
  impl->df = std::move(df);
  impl->label = std::move(label);
  return HoloMap(impl);
}

HoloMap scale(Cx c, const HoloMap& f) {
  if (std::abs(c) < 1e-300) throw std::invalid_argument("scale factor must be nonzero");
  auto impl = std::make_shared<detail::ScaleImpl>(c, f);
  impl->label = "scale(" + f.label() + ")";
  return HoloMap(impl);
}

HoloMap compose(const HoloMap& outer, const HoloMap& inner) {
  if (outer.dim() != inner.dim()) {
    throw std::invalid_argument("compose needs matching dimensions");
  }
  auto impl = std::make_shared<detail::ComposeImpl>(outer, inner);
  impl->label = outer.label() + "." + inner.label();
  return HoloMap(impl);
}

HoloMap coordinatewise(std::vector<HoloMap> comps) {
  if (comps.empty()) throw std::invalid_argument("coordinatewise needs components");
  for (const auto& c : comps) {
    if (c.dim() != 1) throw std::invalid_argument("coordinatewise components must be 1D");
  }
  std::string label = "coordinatewise(";
  for (std::size_t i = 0; i < comps.size(); ++i) {
    label += (i ? "," : "") + comps[i].label();
  }
  label += ")";
  auto impl = std::make_shared<detail::CoordwiseImpl>(std::move(comps));
  impl->label = std::move(label);
  return HoloMap(impl);
}

HoloMap linear_ball_map(const Mat& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("linear map must be square");
  auto impl = std::make_shared<detail::AffineImpl>(M, Vec::Zero(M.rows()), true);
  impl->label = "linear";
  return HoloMap(impl);
}

HoloMap plane_affine(const Mat& M, const Vec& b) {
  if (M.rows() != M.cols() || M.rows() != b.size()) {
    throw std::invalid_argument("affine map shape mismatch");
  }
  auto impl = std::make_shared<detail::AffineImpl>(M, b, false);
  impl->label = "plane-affine";
  return HoloMap(impl);
}

HoloMap plane_affine1(Cx scale_by, Cx shift) {
  Mat M(1, 1);
  M(0, 0) = scale_by;
  return plane_affine(M, vec1(shift));
}

HoloMap inverse_of(const HoloMap& f) {
  auto impl = std::make_shared<detail::InverseImpl>(f);
  if (f.dim() == 1) impl->desc = ImageDescriptor::disk(0.0, 1.0);
  impl->label = "inverse(" + f.label() + ")";
  return HoloMap(impl);
}

// ---------------------------------------------------------------------------
// Newton inversion

namespace {

std::vector<Vec> newton_seeds(int dim) {
  std::vector<Vec> seeds;
  seeds.push_back(Vec::Zero(dim));
  if (dim == 1) {
    for (int k = 0; k < 8; ++k) seeds.push_back(vec1(std::polar(0.5, kPi * k / 4.0)));
    return seeds;
  }
  std::mt19937_64 rng(0x9E3779B9u);
  std::normal_distribution<double> gauss;
  for (int k = 0; k < 8; ++k) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Cx(gauss(rng), gauss(rng));
    seeds.push_back(0.5 * v / v.norm());
  }
  return seeds;
}

// All deduplicated Newton limits with residual <= 1e-10, any modulus.
std::vector<Vec> newton_roots(const HoloMap& f, const Vec& w) {
  std::vector<Vec> roots;
  for (const Vec& seed : newton_seeds(f.dim())) {
    Vec z = seed;
    Vec fz = f.raw(z);
    if (!fz.allFinite()) continue;
    double res = (w - fz).norm();
    bool converged = res <= kNewtonTol;
    for (int it = 0; it < 80 && !converged; ++it) {
      Mat J = f.jacobian(z);
      if (!J.allFinite()) break;
      Vec dz = J.partialPivLu().solve(w - fz);
      if (!dz.allFinite()) break;
      bool moved = false;
      double lam = 1.0;
      for (int bt = 0; bt < 24; ++bt, lam *= 0.5) {
        Vec zn = z + lam * dz;
        if (!(zn.norm() <= 4.0)) continue;
        Vec fn = f.raw(zn);
        if (!fn.allFinite()) continue;
        double rn = (w - fn).norm();
        if (rn < res) {
          z = zn;
          fz = fn;
          res = rn;
          moved = true;
          break;
        }
      }
      if (!moved) break;
      converged = res <= kNewtonTol;
    }
    if (!converged) continue;
    // Polish to rounding level so downstream round-trips (inverse flows,
    // identity checks at t = 0) are not limited by the acceptance tolerance.
    for (int it = 0; it < 4; ++it) {
      Mat J = f.jacobian(z);
      if (!J.allFinite()) break;
      Vec dz = J.partialPivLu().solve(w - fz);
      if (!dz.allFinite()) break;
      Vec zn = z + dz;
      Vec fn = f.raw(zn);
      if (!fn.allFinite()) break;
      double rn = (w - fn).norm();
      if (rn >= res) break;
      z = zn;
      fz = fn;
      res = rn;
    }
    bool duplicate = false;
    for (const Vec& r : roots) {
      if ((r - z).norm() <= kRootAgree) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) roots.push_back(z);
  }
  return roots;
}

}  // namespace

std::optional<Vec> invert(const HoloMap& f, const Vec& w) {
  std::vector<Vec> in_ball;
  for (const Vec& r : newton_roots(f, w)) {
    if (r.norm() < 1.0) in_ball.push_back(r);
  }
  if (in_ball.empty()) return std::nullopt;
  if (in_ball.size() > 1) {
    throw NonUnivalentError("inversion ambiguous: distinct in-ball preimages found");
  }
  return in_ball.front();
}

// ---------------------------------------------------------------------------
// Membership

namespace {

struct Winding {
  long turns = 0;
  bool trustworthy = false;
  double min_dist = 0.0;
};

Winding winding_number(const HoloMap& f, double rho, Cx w) {
  constexpr int kNodes = 1 << 12;
  Winding out;
  Cx prev = f.raw1(std::polar(rho, 0.0)) - w;
  double min_dist = std::abs(prev);
  double max_step = 0.0;
  double sum = 0.0;
  for (int k = 1; k <= kNodes; ++k) {
    Cx cur = f.raw1(std::polar(rho, 2.0 * kPi * k / kNodes)) - w;
    double d = std::abs(cur);
    min_dist = std::min(min_dist, d);
    if (d < 1e-300) {
      out.min_dist = 0.0;
      return out;  // exactly on the contour: untrustworthy
    }
    double step = std::arg(cur / prev);
    max_step = std::max(max_step, std::abs(step));
    sum += step;
    prev = cur;
  }
  out.min_dist = min_dist;
  out.trustworthy = min_dist > 1e-9 && max_step <= 2.5;
  out.turns = std::lround(sum / (2.0 * kPi));
  return out;
}

}  // namespace

Membership image_contains(const HoloMap& f, const Vec& w) {
  Membership m;
  if (f.dim() == 1 && f.descriptor()) {
    m.margin = f.descriptor()->margin(w(0));
    m.state = m.margin > 0.0 ? Region::inside : Region::outside;
    if (m.state == Region::inside) {
      try {
        m.preimage = invert(f, w);
      } catch (const NonUnivalentError&) {
        m.preimage = std::nullopt;
      }
    }
    return m;
  }

  auto roots = newton_roots(f, w);
  const Vec* best_inside = nullptr;
  bool boundary_band = false;
  bool any_outside = false;
  double min_outside = std::numeric_limits<double>::infinity();
  for (const Vec& r : roots) {
    double nr = r.norm();
    if (nr < 1.0 - kEdge) {
      if (best_inside == nullptr || nr < best_inside->norm()) best_inside = &r;
    } else if (nr <= 1.0 + kEdge) {
      boundary_band = true;
    } else {
      any_outside = true;
      min_outside = std::min(min_outside, nr - 1.0);
    }
  }
  if (best_inside != nullptr) {
    m.state = Region::inside;
    m.margin = (1.0 - kEdge) - best_inside->norm();
    m.preimage = *best_inside;
    return m;
  }
  if (!roots.empty() && any_outside && !boundary_band) {
    m.state = Region::outside;
    m.margin = -min_outside;
    return m;
  }

  if (f.dim() == 1) {
    bool all_zero = true, all_trust = true;
    double outside_dist = 0.0;
    for (double rho : {0.9, 0.99, 0.999}) {
      Winding wd = winding_number(f, rho, w(0));
      if (wd.trustworthy && wd.turns >= 1) {
        m.state = Region::inside;
        m.margin = wd.min_dist;
        m.preimage = std::nullopt;
        return m;
      }
      all_trust = all_trust && wd.trustworthy;
      all_zero = all_zero && wd.turns == 0;
      outside_dist = wd.min_dist;
    }
    if (all_trust && all_zero) {
      m.state = Region::outside;
      m.margin = -outside_dist;
      return m;
    }
  }
  m.state = Region::unknown;
  m.margin = 0.0;
  return m;
}

double cauchy_riemann_residual(const HoloMap& f, const Vec& z) {
  const double h = 1e-5;
  const int n = f.dim();
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    Vec ex = Vec::Zero(n), ey = Vec::Zero(n);
    ex(j) = Cx(h, 0.0);
    ey(j) = Cx(0.0, h);
    Vec dx = (f.raw(z + ex) - f.raw(z - ex)) / Cx(2.0 * h, 0.0);
    Vec dy = (f.raw(z + ey) - f.raw(z - ey)) / Cx(0.0, 2.0 * h);
    double num = (dx - dy).norm();
    worst = std::max(worst, num / (1.0 + dx.norm()));
  }
  return worst;
}

}  // namespace rse
