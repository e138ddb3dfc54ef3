#pragma once

#include <cstdint>
#include <random>

#include "bregman/point.hpp"

namespace bregman {

/// The one generator type used for every sampler; seeded per run.
using Rng = std::mt19937_64;

inline Vector gaussian_vector(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline Vector uniform_vector(Rng& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> unif(lo, hi);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = unif(rng);
  return v;
}

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// Uniform direction on the unit sphere of R^n.
inline Vector unit_direction(Rng& rng, Eigen::Index n) {
  for (;;) {
    Vector v = gaussian_vector(rng, n);
    const double norm = v.norm();
    if (norm > 1e-12) return v / norm;
  }
}

}  // namespace bregman
