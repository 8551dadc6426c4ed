#include "rse/verifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rse/branch.hpp"

namespace rse {

namespace {

void set_witness(CheckReport& rep, const Vec& coords, double t, double margin,
                 const std::string& note) {
  if (rep.witness && rep.witness->margin <= margin) return;
  Witness w;
  w.point.assign(coords.data(), coords.data() + coords.size());
  w.t = t;
  w.margin = margin;
  rep.witness = w;
  rep.notes.push_back(note);
}

Vec joint_point(const ProductPoint& pt) {
  Vec j(pt.x.size() + pt.y.size());
  j << pt.x, pt.y;
  return j;
}

// Deterministic coordinate-axis probes. Random directions almost never land
// on the real axis, where slit-type image failures live.
std::vector<Vec> axis_probes(int dim, const std::vector<double>& radii) {
  static const Cx phases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::vector<Vec> pts;
  for (double rho : radii) {
    for (int j = 0; j < dim; ++j) {
      for (const Cx& ph : phases) {
        Vec z = Vec::Zero(dim);
        z(j) = rho * ph;
        pts.push_back(std::move(z));
      }
    }
  }
  return pts;
}

}  // namespace

// ---------------------------------------------------------------------------
// Spirallikeness

CheckReport check_spirallike(const SpirallikeClaim& claim, Sampler& sampler) {
  CheckReport rep;
  rep.check = "spirallike";
  const bool extended = std::holds_alternative<ExtendedMap>(claim.target);
  {
    nlohmann::json j;
    j["target"] = extended ? "extended" : std::get<HoloMap>(claim.target).label();
    j["op_dim"] = claim.op.dim();
    j["accretivity_margin"] = claim.op.accretivity_margin();
    j["t_points"] = claim.t_grid.size();
    j["samples"] = sampler.config().samples;
    j["seed"] = sampler.config().seed;
    rep.params = j.dump();
  }

  std::vector<Mat> flows;
  flows.reserve(claim.t_grid.size());
  for (double t : claim.t_grid) flows.push_back(matrix_exp(claim.op, t));

  double worst = std::numeric_limits<double>::infinity();
  bool violated = false;
  const int N = sampler.config().samples;

  auto tally = [&](const Membership& mem, const Vec& coords, double t) {
    if (mem.state == Region::unknown) {
      ++rep.unknown;
      return;
    }
    ++rep.decided;
    worst = std::min(worst, mem.margin);
    if (mem.margin <= -1e-9) {
      violated = true;
      set_witness(rep, coords, t, mem.margin, "flowed image point left the image");
    }
  };

  if (!extended) {
    const HoloMap& h = std::get<HoloMap>(claim.target);
    if (claim.op.dim() != h.dim()) {
      throw std::invalid_argument("spirallike operator dimension does not match the map");
    }
    auto probe = [&](const Vec& z) {
      Vec w = h.raw(z);
      for (std::size_t k = 0; k < flows.size(); ++k) {
        Vec wt = flows[k] * w;
        tally(image_contains(h, wt), wt, claim.t_grid[k]);
      }
    };
    for (const Vec& z : axis_probes(h.dim(), sampler.config().radii)) probe(z);
    for (int i = 0; i < N; ++i) probe(sampler.ball_point(h.dim(), NormSpec::euclidean()));
  } else {
    const ExtendedMap& em = std::get<ExtendedMap>(claim.target);
    const SpacePair& sp = em.space();
    if (claim.op.dim() != sp.n + sp.m) {
      throw std::invalid_argument("spirallike operator dimension does not match the space");
    }
    for (int i = 0; i < N; ++i) {
      ProductPoint pt = sampler.product_point(sp);
      Vec img = joint_point(em(pt));
      for (std::size_t k = 0; k < flows.size(); ++k) {
        Vec jt = flows[k] * img;
        ProductPoint cur{jt.head(sp.n), jt.tail(sp.m)};
        tally(extended_membership(em, cur), jt, claim.t_grid[k]);
      }
    }
  }

  rep.worst_margin = std::isfinite(worst) ? worst : 0.0;
  rep.verdict = standard_verdict(rep.decided, rep.unknown, rep.worst_margin, violated);
  return rep;
}

// ---------------------------------------------------------------------------
// The multiplier exponent C

MotionSpec MotionSpec::linear(LinearOperatorSpec A) {
  MotionSpec m;
  m.kind = Kind::linear;
  m.A = std::move(A);
  return m;
}

MotionSpec MotionSpec::shift(Vec tau) {
  MotionSpec m;
  m.kind = Kind::shift;
  m.tau = std::move(tau);
  return m;
}

Cx derive_c(const GammaSpec& gamma, const MotionSpec& motion) {
  switch (gamma.kind()) {
    case GammaSpec::Kind::jacobian_power:
      if (motion.kind == MotionSpec::Kind::shift) return Cx(0.0, 0.0);
      return gamma.exponent() * motion.A->trace();
    case GammaSpec::Kind::boundary_ratio_biholo: {
      if (motion.kind != MotionSpec::Kind::linear) break;
      const Vec& tau = gamma.tau();
      if (tau.size() != motion.A->dim()) break;
      Vec v = motion.A->matrix().adjoint() * tau;
      Cx lambda_bar = pair_with(v, tau);
      if ((v - lambda_bar * tau).norm() > 1e-8) {
        throw std::invalid_argument(
            "derive_c: tau is not an eigenvector of the adjoint of A");
      }
      return 2.0 * std::conj(lambda_bar) / gamma.r();
    }
    case GammaSpec::Kind::product: {
      Cx c(0.0, 0.0);
      for (const auto& f : gamma.factors()) c += derive_c(f, motion);
      return c;
    }
    default:
      break;
  }
  throw std::invalid_argument("derive_c: unsupported gamma/motion pair");
}

CheckReport derive_c_report(const GammaSpec& gamma, const MotionSpec& motion,
                            const HoloMap& h, const SpacePair& sp, Sampler& sampler) {
  CheckReport rep;
  rep.check = "derive-c";
  Cx C = derive_c(gamma, motion);
  {
    nlohmann::json j;
    j["gamma"] = gamma.describe();
    j["motion"] = motion.kind == MotionSpec::Kind::linear ? "linear" : "shift";
    j["C"] = {C.real(), C.imag()};
    j["samples"] = sampler.config().samples;
    j["seed"] = sampler.config().seed;
    rep.params = j.dump();
  }

  double max_resid = 0.0;
  bool violated = false;
  const int N = sampler.config().samples;
  for (int i = 0; i < N; ++i) {
    double t = sampler.uniform(0.05, 2.0);
    Vec x = sampler.ball_point(sp.n, sp.norm_x);
    HoloMap motion_map =
        motion.kind == MotionSpec::Kind::linear
            ? plane_affine(matrix_exp(*motion.A, t), Vec::Zero(sp.n))
            : plane_affine(Mat::Identity(sp.n, sp.n), (t * motion.tau).eval());
    try {
      Cx lhs = gamma_eval(gamma, compose(motion_map, h), x);
      Cx rhs = std::exp(-C * t) * gamma_eval(gamma, h, x);
      double resid = std::abs(lhs - rhs);
      max_resid = std::max(max_resid, resid);
      if (resid > 1e-9) {
        violated = true;
        set_witness(rep, x, t, -resid, "multiplier identity residual above 1e-9");
      }
      ++rep.decided;
    } catch (const ZeroOnPathError&) {
      ++rep.unknown;
    }
  }
  rep.worst_margin = -max_resid;
  rep.verdict = standard_verdict(rep.decided, rep.unknown, rep.worst_margin, violated);
  return rep;
}

// ---------------------------------------------------------------------------
// Extended spirallikeness

CheckReport check_extended_spirallike(const HoloMap& h, const GammaSpec& gamma,
                                      const LinearOperatorSpec& A,
                                      const LinearOperatorSpec& B, const SpacePair& sp,
                                      const std::vector<double>& t_grid, Sampler& sampler) {
  Cx C;
  try {
    C = derive_c(gamma, MotionSpec::linear(A));
  } catch (const std::invalid_argument& e) {
    CheckReport rep;
    rep.check = "extended-spirallike";
    rep.verdict = Verdict::inconclusive;
    rep.notes.push_back(std::string("no closed-form multiplier exponent: ") + e.what());
    return rep;
  }

  // Prerequisite: the base map is A-spirallike on samples.
  SpirallikeClaim base_claim{h, A, t_grid};
  CheckReport base_rep = check_spirallike(base_claim, sampler);
  if (base_rep.verdict != Verdict::pass) {
    CheckReport rep;
    rep.check = "extended-spirallike";
    rep.verdict = Verdict::inconclusive;
    rep.worst_margin = base_rep.worst_margin;
    rep.witness = base_rep.witness;
    rep.notes.push_back("prerequisite failed: base map is not A-spirallike on samples");
    for (const auto& n : base_rep.notes) rep.notes.push_back("base: " + n);
    return rep;
  }

  Mat block = Mat::Zero(sp.n + sp.m, sp.n + sp.m);
  block.topLeftCorner(sp.n, sp.n) = A.matrix();
  block.bottomRightCorner(sp.m, sp.m) = B.matrix() + C * Mat::Identity(sp.m, sp.m);
  LinearOperatorSpec block_op(block);

  SpirallikeClaim ext_claim{extend(gamma, h, sp), block_op, t_grid};
  CheckReport rep = check_spirallike(ext_claim, sampler);
  rep.check = "extended-spirallike";
  {
    nlohmann::json j = nlohmann::json::parse(rep.params);
    j["C"] = {C.real(), C.imag()};
    j["base_margin"] = A.accretivity_margin();
    j["fiber_margin"] = B.accretivity_margin() + C.real();
    j["block_margin"] = block_op.accretivity_margin();
    rep.params = j.dump();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Convexity in a direction

CheckReport check_convex_in_direction(const HoloMap& h, const Vec& tau,
                                      const std::vector<double>& t_grid, Sampler& sampler) {
  CheckReport rep;
  rep.check = "convex-in-direction";
  {
    nlohmann::json j;
    j["map"] = h.label();
    j["t_points"] = t_grid.size();
    j["samples"] = sampler.config().samples;
    j["seed"] = sampler.config().seed;
    rep.params = j.dump();
  }
  double worst = std::numeric_limits<double>::infinity();
  bool violated = false;
  const int N = sampler.config().samples;
  auto probe = [&](const Vec& z) {
    Vec w = h.raw(z);
    for (double t : t_grid) {
      Vec wt = w + t * tau;
      Membership mem = image_contains(h, wt);
      if (mem.state == Region::unknown) {
        ++rep.unknown;
        continue;
      }
      ++rep.decided;
      worst = std::min(worst, mem.margin);
      if (mem.margin <= -1e-9) {
        violated = true;
        set_witness(rep, wt, t, mem.margin, "shifted image point left the image");
      }
    }
  };
  for (const Vec& z : axis_probes(h.dim(), sampler.config().radii)) probe(z);
  for (int i = 0; i < N; ++i) probe(sampler.ball_point(h.dim(), NormSpec::euclidean()));
  rep.worst_margin = std::isfinite(worst) ? worst : 0.0;
  rep.verdict = standard_verdict(rep.decided, rep.unknown, rep.worst_margin, violated);
  return rep;
}

CheckReport check_convex_in_direction(const ExtendedMap& em, const Vec& tau,
                                      const Mat& b_plus_c, const std::vector<double>& t_grid,
                                      Sampler& sampler) {
  CheckReport rep;
  rep.check = "convex-in-direction-extended";
  const SpacePair& sp = em.space();
  {
    nlohmann::json j;
    j["map"] = em.base().label();
    j["gamma"] = em.gamma().describe();
    j["t_points"] = t_grid.size();
    j["samples"] = sampler.config().samples;
    j["seed"] = sampler.config().seed;
    rep.params = j.dump();
  }
  std::vector<Mat> fiber_flows;
  fiber_flows.reserve(t_grid.size());
  for (double t : t_grid) fiber_flows.push_back(expm((-t * b_plus_c).eval()));

  double worst = std::numeric_limits<double>::infinity();
  bool violated = false;
  const int N = sampler.config().samples;
  for (int i = 0; i < N; ++i) {
    ProductPoint pt = sampler.product_point(sp);
    ProductPoint img = em(pt);
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
      ProductPoint cur{(img.x + t_grid[k] * tau).eval(), (fiber_flows[k] * img.y).eval()};
      Membership mem = extended_membership(em, cur);
      if (mem.state == Region::unknown) {
        ++rep.unknown;
        continue;
      }
      ++rep.decided;
      worst = std::min(worst, mem.margin);
      if (mem.margin <= -1e-9) {
        violated = true;
        set_witness(rep, joint_point(cur), t_grid[k], mem.margin,
                    "curve point left the extended image");
      }
    }
  }
  rep.worst_margin = std::isfinite(worst) ? worst : 0.0;
  rep.verdict = standard_verdict(rep.decided, rep.unknown, rep.worst_margin, violated);
  return rep;
}

// ---------------------------------------------------------------------------
// Affine invariance

namespace {

bool shift_insensitive(const GammaSpec& g) {
  if (g.kind() == GammaSpec::Kind::jacobian_power) return true;
  if (g.kind() == GammaSpec::Kind::product) {
    for (const auto& f : g.factors()) {
      if (!shift_insensitive(f)) return false;
    }
    return true;
  }
  return false;
}

}  // namespace

CheckReport check_affine_invariance(const HoloMap& h, const GammaSpec& gamma,
                                    const LinearOperatorSpec& A, double lambda,
                                    const Vec& tau, const Semigroup& g, const SpacePair& sp,
                                    const std::vector<double>& t_grid, Sampler& sampler) {
  CheckReport rep;
  rep.check = "affine-invariance";
  if (lambda > 0.0 && !shift_insensitive(gamma)) {
    rep.verdict = Verdict::inconclusive;
    rep.notes.push_back("no closed-form multiplier exponent for a shifting motion");
    return rep;
  }
  Cx C;
  try {
    C = derive_c(gamma, MotionSpec::linear(A));
  } catch (const std::invalid_argument& e) {
    rep.verdict = Verdict::inconclusive;
    rep.notes.push_back(std::string("no closed-form multiplier exponent: ") + e.what());
    return rep;
  }
  {
    nlohmann::json j;
    j["map"] = h.label();
    j["gamma"] = gamma.describe();
    j["lambda"] = lambda;
    j["C"] = {C.real(), C.imag()};
    j["samples"] = sampler.config().samples;
    j["seed"] = sampler.config().seed;
    rep.params = j.dump();
  }

  Semigroup psi = Semigroup::affine(A, lambda, tau);
  ExtendedMap em = extend(gamma, h, sp);

  std::vector<HoloMap> psi_maps;
  psi_maps.reserve(t_grid.size());
  for (double t : t_grid) psi_maps.push_back(psi.time_map(t));

  double worst = std::numeric_limits<double>::infinity();
  bool violated = false;
  const int N = sampler.config().samples;
  for (int i = 0; i < N; ++i) {
    ProductPoint pt = sampler.product_point(sp);
    ProductPoint img = em(pt);
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
      double t = t_grid[k];
      ProductPoint cur{psi_maps[k].raw(img.x),
                       (std::exp(-C * t) * g.apply(t, img.y)).eval()};
      Membership mem = extended_membership(em, cur);
      if (mem.state == Region::unknown) {
        ++rep.unknown;
        continue;
      }
      ++rep.decided;
      worst = std::min(worst, mem.margin);
      if (mem.margin <= -1e-9) {
        violated = true;
        set_witness(rep, joint_point(cur), t, mem.margin,
                    "affine-motion curve left the extended image");
      }
    }
  }
  rep.worst_margin = std::isfinite(worst) ? worst : 0.0;
  rep.verdict = standard_verdict(rep.decided, rep.unknown, rep.worst_margin, violated);
  return rep;
}

// ---------------------------------------------------------------------------
// Figure data

CurveTable export_invariance_manifold(const ExtendedMap& em, const MotionSpec& motion,
                                      const ProductPoint& base,
                                      const std::vector<double>& t_grid,
                                      const std::vector<double>& fan) {
  Membership base_mem = extended_membership(em, base);
  if (base_mem.state != Region::inside) {
    throw std::invalid_argument("manifold base point is not inside the extended image");
  }
  const SpacePair& sp = em.space();

  Cx C(0.0, 0.0);
  if (motion.kind == MotionSpec::Kind::linear) {
    if (motion.A->dim() != sp.n) {
      throw std::invalid_argument("manifold motion dimension does not match the space");
    }
    C = derive_c(em.gamma(), motion);
  } else {
    C = derive_c(em.gamma(), motion);  // 0 for shift-insensitive rules, else throws
  }

  double w_mag = sp.ny(base.y);
  Vec w_dir;
  if (w_mag > 0.0) {
    w_dir = base.y / w_mag;
  } else {
    w_dir = Vec::Zero(sp.m);
    w_dir(0) = Cx(1.0, 0.0);
  }

  CurveTable table;
  table.columns.push_back("t");
  for (int c = 0; c < sp.n + sp.m; ++c) {
    table.columns.push_back("coord" + std::to_string(c) + "_re");
    table.columns.push_back("coord" + std::to_string(c) + "_im");
  }
  table.columns.push_back("margin");
  table.worst_margin = std::numeric_limits<double>::infinity();

  for (double t : t_grid) {
    Vec zt;
    if (motion.kind == MotionSpec::Kind::linear) {
      zt = matrix_exp(*motion.A, t) * base.x;
    } else {
      zt = base.x + t * motion.tau;
    }
    double decay = std::exp(-C.real() * t);
    for (double s : fan) {
      ProductPoint cur{zt, (s * decay * w_mag * w_dir).eval()};
      Membership mem = extended_membership(em, cur);
      std::vector<double> row;
      row.push_back(t);
      Vec joint = joint_point(cur);
      for (int c = 0; c < joint.size(); ++c) {
        row.push_back(joint(c).real());
        row.push_back(joint(c).imag());
      }
      double margin = mem.state == Region::unknown ? 0.0 : mem.margin;
      row.push_back(margin);
      table.rows.push_back(std::move(row));
      table.worst_margin = std::min(table.worst_margin, margin);
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Bloch-type bounds

namespace {

// Deterministic interior lattice on a fixed radius ladder; refinement only
// densifies the phase direction and always keeps the real axis (theta = 0),
// where slit- and boundary-type suprema concentrate. A refined grid therefore
// contains the coarse grid's extremal region and the reported suprema are
// stable under refinement.
std::vector<Vec> bloch_grid(int n, int grid_points) {
  static const double radii[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
  std::vector<Vec> pts;
  pts.push_back(Vec::Zero(n));
  if (n == 1) {
    int Ka = std::max(8, grid_points / 10);
    for (double r : radii) {
      for (int j = 0; j < Ka; ++j) {
        pts.push_back(vec1(std::polar(r, 2.0 * M_PI * j / Ka)));
      }
    }
    return pts;
  }
  // Higher dimensions: fixed direction set, refined phases along each ray.
  Sampler dir_sampler(SamplerConfig{.samples = 1, .seed = 777});
  std::vector<Vec> dirs;
  for (int d = 0; d < 16; ++d) {
    Vec v = dir_sampler.ball_point(n, NormSpec::euclidean());
    double nv = v.norm();
    if (nv > 0.0) dirs.push_back((v / nv).eval());
  }
  int Ka = std::max(2, grid_points / (10 * 16));
  for (double r : radii) {
    for (const Vec& d : dirs) {
      for (int j = 0; j < Ka; ++j) {
        Cx phase = std::polar(1.0, 2.0 * M_PI * j / Ka);
        pts.push_back((r * phase * d).eval());
      }
    }
  }
  return pts;
}

Vec gamma_gradient(const GammaSpec& gamma, const HoloMap& h, const Vec& x) {
  const double step = 1e-5;
  Vec grad(x.size());
  for (int j = 0; j < x.size(); ++j) {
    Vec xp = x, xm = x;
    xp(j) += step;
    xm(j) -= step;
    grad(j) = (gamma_eval(gamma, h, xp) - gamma_eval(gamma, h, xm)) / (2.0 * step);
  }
  return grad;
}

}  // namespace

BlochBounds bloch_bounds(const HoloMap& h, const GammaSpec& gamma, const SpacePair& sp,
                         int grid_points) {
  BlochBounds out;
  CheckReport& rep = out.report;
  rep.check = "bloch-bounds";
  {
    nlohmann::json j;
    j["map"] = h.label();
    j["gamma"] = gamma.describe();
    j["grid_points"] = grid_points;
    rep.params = j.dump();
  }

  // Fixed unit directions in the product gauge for the operator-norm estimate.
  Sampler zdir(SamplerConfig{.samples = 1, .seed = 555});
  std::vector<ProductPoint> directions;
  for (int i = 0; i < 100; ++i) {
    ProductPoint u = zdir.product_point(sp);
    double nu = product_norm(sp, u);
    if (nu > 1e-12) {
      u.x /= nu;
      u.y /= nu;
      directions.push_back(std::move(u));
    }
  }

  // Fixed fiber fan paired with every grid point of the first factor.
  const double fan_s[4] = {0.25, 0.5, 0.75, 0.95};
  const double fan_phase[2] = {0.0, 1.047197551196598};

  for (const Vec& x : bloch_grid(sp.n, grid_points)) {
    double nx = sp.nx(x);
    double weight_x = 1.0 - nx * nx;

    Mat Jh = h.jacobian(x);
    double map_q = Jh.jacobiSvd().singularValues()(0) * weight_x;
    out.map_sup = std::max(out.map_sup, map_q);

    Cx gval = gamma_eval(gamma, h, x);
    out.gamma_sup = std::max(out.gamma_sup, std::abs(gval) * weight_x);

    Vec grad = gamma_gradient(gamma, h, x);
    double px = sp.profile(nx);
    out.dgamma_sup = std::max(out.dgamma_sup, grad.norm() * px * weight_x);

    for (double s : fan_s) {
      for (double phase : fan_phase) {
        Vec y = Vec::Zero(sp.m);
        y(0) = std::polar(s * px, phase);
        ProductPoint pt{x, y};
        double npt = product_norm(sp, pt);
        double weight = 1.0 - npt * npt;
        if (weight <= 0.0) continue;

        // Differential blocks of the extension at (x, y).
        // d(Gamma y)/dx = y grad^T, d(Gamma y)/dy = Gamma I.
        double op_norm = 0.0;
        for (const ProductPoint& u : directions) {
          Vec dx = Jh * u.x;
          Vec dy = (grad.transpose() * u.x)(0) * y + gval * u.y;
          op_norm = std::max(op_norm, product_norm(sp, ProductPoint{dx, dy}));
        }
        out.extended_sup = std::max(out.extended_sup, op_norm * weight);
        ++rep.decided;
      }
    }
  }

  double bound = out.map_sup + out.gamma_sup + out.dgamma_sup;
  rep.worst_margin = bound + 1e-9 - out.extended_sup;
  bool violated = rep.worst_margin < 0.0;
  if (violated) rep.notes.push_back("extended supremum exceeds the three-term bound");
  {
    nlohmann::json j = nlohmann::json::parse(rep.params);
    j["map_sup"] = out.map_sup;
    j["gamma_sup"] = out.gamma_sup;
    j["dgamma_sup"] = out.dgamma_sup;
    j["extended_sup"] = out.extended_sup;
    rep.params = j.dump();
  }
  rep.verdict = violated ? Verdict::violation : Verdict::pass;
  return out;
}

}  // namespace rse
