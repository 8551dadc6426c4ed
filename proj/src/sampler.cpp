#include "rse/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace rse {
namespace {

constexpr double kTwoPi = 6.283185307179586476925;

// splitmix64: tiny, portable, and stable across standard libraries.
std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

Sampler::Sampler(SamplerConfig cfg) : cfg_(std::move(cfg)), state_(cfg_.seed) {
  if (cfg_.samples < 1) throw std::invalid_argument("sampler needs at least one sample");
  if (cfg_.radii.empty()) throw std::invalid_argument("sampler needs radius strata");
  for (double r : cfg_.radii) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("radius strata must lie in (0,1)");
  }
  if (!(cfg_.t_min > 0.0) || !(cfg_.t_max >= cfg_.t_min) || cfg_.t_points < 1) {
    throw std::invalid_argument("bad time grid");
  }
}

double Sampler::next_u01() {
  return (splitmix64(state_) >> 11) * 0x1.0p-53;
}

double Sampler::uniform(double a, double b) { return a + (b - a) * next_u01(); }

Cx Sampler::unit_phase() { return std::polar(1.0, uniform(0.0, kTwoPi)); }

Vec Sampler::direction(int dim, const NormSpec& norm) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) {
    // Box-Muller pair per coordinate.
    double u1 = next_u01(), u2 = next_u01();
    if (u1 < 1e-300) u1 = 1e-300;
    double rad = std::sqrt(-2.0 * std::log(u1));
    v(i) = Cx(rad * std::cos(kTwoPi * u2), rad * std::sin(kTwoPi * u2));
  }
  double n = norm(v);
  if (n < 1e-12) {
    v = Vec::Zero(dim);
    v(0) = Cx(1.0, 0.0);
    n = norm(v);
  }
  return v / n;
}

Vec Sampler::ball_point(int dim, const NormSpec& norm) {
  double r = cfg_.radii[stratum_ % cfg_.radii.size()];
  ++stratum_;
  return r * direction(dim, norm);
}

ProductPoint Sampler::product_point(const SpacePair& sp) {
  ProductPoint pt;
  pt.x = ball_point(sp.n, sp.norm_x);
  double cap = sp.profile(sp.nx(pt.x));
  double s = cfg_.radii[stratum_ % cfg_.radii.size()];
  ++stratum_;
  pt.y = (s * cap) * direction(sp.m, sp.norm_y);
  return pt;
}

std::vector<double> Sampler::t_grid() const {
  std::vector<double> ts;
  ts.reserve(cfg_.t_points);
  if (cfg_.t_points == 1) {
    ts.push_back(cfg_.t_min);
    return ts;
  }
  double ratio = cfg_.t_max / cfg_.t_min;
  for (int k = 0; k < cfg_.t_points; ++k) {
    ts.push_back(cfg_.t_min * std::pow(ratio, static_cast<double>(k) / (cfg_.t_points - 1)));
  }
  return ts;
}

}  // namespace rse
