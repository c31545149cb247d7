// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace gibbslab {

/// Pairwise (cascade) summation; rounding error grows as O(log n).
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 16) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// log(sum(exp(x))) over finite entries; -inf entries contribute nothing.
inline double log_sum_exp(std::span<const double> xs) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double x : xs) peak = std::max(peak, x);
  if (!std::isfinite(peak)) return peak;
  std::vector<double> shifted(xs.size());
  std::transform(xs.begin(), xs.end(), shifted.begin(),
                 [peak](double x) { return std::exp(x - peak); });
  return peak + std::log(pairwise_sum(shifted));
}

/// log(exp(a) - exp(b)) for a >= b.
inline double log_diff_exp(double a, double b) {
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(-std::exp(b - a));
}

/// Composite Simpson rule on a uniform grid; an even number of intervals
/// is required (odd interval counts fall back to a 3/8 rule on the tail).
inline double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (f[0] + f[1]);
  if (n == 3) return h / 3.0 * (f[0] + 4.0 * f[1] + f[2]);
  std::size_t m = n;
  double tail = 0.0;
  if ((n - 1) % 2 == 1) {
    tail = 3.0 * h / 8.0 *
           (f[n - 4] + 3.0 * f[n - 3] + 3.0 * f[n - 2] + f[n - 1]);
    m = n - 3;
  }
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 1; i + 1 < m; i += 2) odd += f[i];
  for (std::size_t i = 2; i + 1 < m; i += 2) even += f[i];
  return h / 3.0 * (f[0] + f[m - 1] + 4.0 * odd + 2.0 * even) + tail;
}

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b] (Newton on P_n).
GaussLegendre gauss_legendre(std::size_t n, double a = 0.0, double b = 1.0);

/// Standard normal upper-tail probability 1 - Phi(x).
inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace gibbslab
