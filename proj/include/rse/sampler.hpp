#pragma once

#include <cstdint>
#include <vector>

#include "rse/space.hpp"
#include "rse/types.hpp"

namespace rse {

struct SamplerConfig {
  int samples = 1000;
  std::uint64_t seed = 20260814ull;
  // Radius strata for interior points; directions are uniform on the sphere.
  std::vector<double> radii = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
  // Geometric time grid.
  double t_min = 0.01;
  double t_max = 10.0;
  int t_points = 25;
};

// Deterministic stratified sampler. Point i draws its radius from stratum
// i mod |radii|, so equal sample counts visit identical strata.
class Sampler {
 public:
  explicit Sampler(SamplerConfig cfg);

  const SamplerConfig& config() const { return cfg_; }

  // Interior point of the unit ball of C^dim at the next stratum radius
  // (measured in `norm`).
  Vec ball_point(int dim, const NormSpec& norm);
  // Interior point of the product ball: x stratified in D1, then y scaled
  // below p(||x||) by a second stratum factor.
  ProductPoint product_point(const SpacePair& sp);

  std::vector<double> t_grid() const;

  double uniform(double a, double b);
  Cx unit_phase();

 private:
  SamplerConfig cfg_;
  std::uint64_t state_;
  std::size_t stratum_ = 0;

  double next_u01();
  Vec direction(int dim, const NormSpec& norm);
};

}  // namespace rse
