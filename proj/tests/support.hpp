#pragma once

// Independent reference computations and random generators for the tests.
// Nothing here calls into the solvers under test.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "bregman/algorithms.hpp"

namespace testing {

using bregman::LegendreFunction;
using bregman::PrimalPoint;
using bregman::Vector;
using bregman::Matrix;

// ---------------------------------------------------------------------------
// Generators

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng); }

  Vector normal_vector(Eigen::Index n, double scale = 1.0) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * normal();
    return v;
  }

  Vector unit(Eigen::Index n) {
    for (;;) {
      Vector v = normal_vector(n);
      if (v.norm() > 1e-6) return v / v.norm();
    }
  }

  /// A point of int dom f.
  Vector point(const LegendreFunction& f, double scale = 2.0) {
    const Eigen::Index n = f.dim();
    if (f.positive_domain()) {
      Vector v(n);
      for (Eigen::Index i = 0; i < n; ++i) v[i] = std::exp(0.7 * scale * normal());
      return v;
    }
    return normal_vector(n, scale);
  }

  std::vector<double> weights(std::size_t k) {
    std::vector<double> w(k);
    double total = 0.0;
    for (auto& t : w) total += (t = uniform(0.05, 1.0));
    for (auto& t : w) t /= total;
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) head += w[i];
    w[k - 1] = 1.0 - head;
    return w;
  }
};

inline std::vector<LegendreFunction> geometries(Eigen::Index n) {
  return {LegendreFunction::squared_norm(n), LegendreFunction::power_p(1.5, n), LegendreFunction::power_p(3.0, n),
          LegendreFunction::neg_entropy(n)};
}

// ---------------------------------------------------------------------------
// Scalar closed forms, written from the defining formulas

inline double power_value(double p, double t) { return std::pow(std::abs(t), p) / p; }
inline double power_grad(double p, double t) { return t == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(t), p - 1.0), t); }
inline double power_distance(double p, double a, double b) {
  return power_value(p, a) - power_value(p, b) - power_grad(p, b) * (a - b);
}

inline double soft_threshold(double v, double w) {
  if (v > w) return v - w;
  if (v < -w) return v + w;
  return 0.0;
}

// ---------------------------------------------------------------------------
// Euclidean projection onto {a_i x <= b_i} / {a_i x = b_i} by active-set
// enumeration: try every subset of rows as active, keep the closest
// feasible KKT point with valid multiplier signs.

struct Row {
  Vector a;
  double b;
  bool equality;
};

inline Vector euclidean_project_rows(const Vector& x, const std::vector<Row>& rows) {
  const std::size_t m = rows.size();
  std::optional<Vector> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    bool skip = false;
    for (std::size_t i = 0; i < m; ++i) {
      if (rows[i].equality && !((mask >> i) & 1u)) skip = true;
    }
    if (skip) continue;
    std::vector<std::size_t> act;
    for (std::size_t i = 0; i < m; ++i) {
      if ((mask >> i) & 1u) act.push_back(i);
    }
    Vector z = x;
    Vector lambda;
    if (!act.empty()) {
      Matrix A(static_cast<Eigen::Index>(act.size()), x.size());
      Vector r(static_cast<Eigen::Index>(act.size()));
      for (std::size_t k = 0; k < act.size(); ++k) {
        A.row(static_cast<Eigen::Index>(k)) = rows[act[k]].a.transpose();
        r[static_cast<Eigen::Index>(k)] = rows[act[k]].a.dot(x) - rows[act[k]].b;
      }
      const Matrix G = A * A.transpose();
      if (std::abs(G.determinant()) < 1e-12) continue;
      lambda = G.ldlt().solve(r);
      z = x - A.transpose() * lambda;
    }
    bool ok = true;
    for (std::size_t k = 0; k < act.size(); ++k) {
      if (!rows[act[k]].equality && lambda[static_cast<Eigen::Index>(k)] < -1e-12) ok = false;
    }
    for (const auto& row : rows) {
      const double g = row.a.dot(z) - row.b;
      if (row.equality ? std::abs(g) > 1e-9 : g > 1e-9) ok = false;
    }
    if (!ok) continue;
    const double d = (z - x).norm();
    if (d < best_d) {
      best_d = d;
      best = z;
    }
  }
  return *best;
}

inline Vector euclidean_project_box(const Vector& x, const Vector& lo, const Vector& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

/// Euclidean projection onto the segment [u, v].
inline Vector euclidean_project_segment(const Vector& x, const Vector& u, const Vector& v) {
  const Vector d = v - u;
  const double t = std::clamp((x - u).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return u + t * d;
}

}  // namespace testing
