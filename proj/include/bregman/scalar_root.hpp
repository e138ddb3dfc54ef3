#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace bregman::detail {

/// Root of an increasing function on [lo, hi] with fn(lo) <= 0 <= fn(hi).
/// `fn` returns {value, derivative}; Newton steps that leave the bracket
/// fall back to bisection.
template <class Fn>
double safeguarded_newton(Fn&& fn, double lo, double hi, int max_iter = 200) {
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const auto [v, d] = fn(x);
    if (v == 0.0) return x;
    if (v < 0.0) lo = x; else hi = x;
    double next = (d > 0.0 && std::isfinite(d)) ? x - v / d : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(x) || next == lo ||
        next == hi) {
      return next;
    }
    x = next;
  }
  return x;
}

/// Root of a non-increasing function by bisection on [lo, hi] with
/// fn(lo) >= 0 >= fn(hi). Returns the final bracket.
template <class Fn>
std::pair<double, double> bisect_decreasing(Fn&& fn, double lo, double hi, double abs_floor, int max_iter = 400) {
  for (int it = 0; it < max_iter; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    const double w = hi - lo;
    if (w <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)) || w <= abs_floor) {
      break;
    }
    const double v = fn(mid);
    if (v > 0.0) {
      lo = mid;
    } else if (v < 0.0) {
      hi = mid;
    } else {
      return {mid, mid};
    }
  }
  return {lo, hi};
}

}  // namespace bregman::detail
