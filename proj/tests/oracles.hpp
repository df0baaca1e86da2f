// Copyright 2026 The mvspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Independent reference computations shared by the unit and acceptance tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "mvspec/rng.hpp"

namespace mvspec::testing {

// Standard normal CDF from its Taylor series around 0; accurate for |x| <= 5.
inline double normal_cdf_series(double x) {
  double term = x;
  double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= x * x / (2.0 * n + 1.0);
    sum += term;
  }
  return 0.5 + sum * std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Direct evaluation of the lag-j two-parameter process at r, no grid.
inline double brute_v2(std::span<const double> u, std::size_t lag, double r1, double r2) {
  const std::size_t m = u.size() - lag;
  double acc = 0.0;
  for (std::size_t k = lag; k < u.size(); ++k) {
    acc += (u[k] <= r1 && u[k - lag] <= r2 ? 1.0 : 0.0) - r1 * r2;
  }
  return acc / std::sqrt(static_cast<double>(m));
}

// Largest |V| over an N x N grid of interior points; a lower bound for the sup.
inline double brute_ks_grid(std::span<const double> u, std::size_t lag, std::size_t N) {
  double best = 0.0;
  for (std::size_t a = 1; a <= N; ++a) {
    for (std::size_t b = 1; b <= N; ++b) {
      const double r1 = static_cast<double>(a) / static_cast<double>(N);
      const double r2 = static_cast<double>(b) / static_cast<double>(N);
      best = std::max(best, std::abs(brute_v2(u, lag, r1, r2)));
    }
  }
  return best;
}

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
};

// Monte Carlo integral of f over [0,1]^2 with uniform points.
template <typename F>
McEstimate mc_integrate2(F&& f, std::size_t points, RngStream& rng) {
  double s = 0.0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double a = rng.uniform();
    const double b = rng.uniform();
    const double v = f(a, b);
    s += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(points);
  const double mean = s / n;
  return {mean, std::sqrt(std::max(0.0, s2 / n - mean * mean) / n)};
}

// Two-sample Kolmogorov-Smirnov distance.
inline double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / a.size() -
                                   static_cast<double>(j) / b.size()));
  }
  return best;
}

// 5% critical value of the two-sample KS distance.
inline double two_sample_ks_critical(std::size_t n1, std::size_t n2) {
  return 1.358 * std::sqrt(static_cast<double>(n1 + n2) / (static_cast<double>(n1) * n2));
}

// Sample autocorrelation computed with plain loops.
inline double plain_acf(std::span<const double> x, std::size_t lag) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    den += (x[t] - mean) * (x[t] - mean);
    if (t >= lag) num += (x[t] - mean) * (x[t - lag] - mean);
  }
  return num / den;
}

inline double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

}  // namespace mvspec::testing
