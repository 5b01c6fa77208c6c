#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "archsmell/errors.hpp"

namespace archsmell {

/// Quartiles and Tukey inner fences of one sample.
struct FenceResult {
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double iqr = 0;
  double low_fence = 0;
  double high_fence = 0;
};

namespace detail {

// Quantile of a sorted sample by linear interpolation at rank (n-1)*p.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = static_cast<double>(n - 1) * p;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace detail

struct Quartiles {
  double q1 = 0;
  double median = 0;
  double q3 = 0;
};

/// (q1, median, q3) of a nonempty sample; input order is irrelevant.
inline Quartiles quartiles(std::span<const double> values) {
  if (values.empty()) throw ValidationError("quartiles: empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return {detail::quantile_sorted(sorted, 0.25),
          detail::quantile_sorted(sorted, 0.50),
          detail::quantile_sorted(sorted, 0.75)};
}

inline FenceResult inner_fences(std::span<const double> values) {
  const Quartiles q = quartiles(values);
  FenceResult r;
  r.q1 = q.q1;
  r.median = q.median;
  r.q3 = q.q3;
  r.iqr = q.q3 - q.q1;
  r.low_fence = q.q1 - 1.5 * r.iqr;
  r.high_fence = q.q3 + 1.5 * r.iqr;
  return r;
}

/// q3 + 1.5*iqr — the upper inner fence, used as the "too many" cutoff.
inline double high_threshold(std::span<const double> values) {
  return inner_fences(values).high_fence;
}

/// q1 - 1.5*iqr — the lower inner fence, used as the "too few" cutoff.
inline double low_threshold(std::span<const double> values) {
  return inner_fences(values).low_fence;
}

inline double high_threshold(const std::vector<double>& values) {
  return high_threshold(std::span<const double>(values));
}

inline double low_threshold(const std::vector<double>& values) {
  return low_threshold(std::span<const double>(values));
}

}  // namespace archsmell
