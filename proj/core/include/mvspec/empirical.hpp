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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mvspec {

/// A Cramer-von Mises / Kolmogorov-Smirnov pair for one empirical process.
struct ProcessNorms {
  double cvm = 0.0;
  double ks = 0.0;
};

/// Piecewise-constant structure of a two-parameter process built from m
/// pairs. Breaks are the sorted unique coordinates plus {0, 1}; cell (p, q)
/// is [r1_breaks[p], r1_breaks[p+1]) x [r2_breaks[q], r2_breaks[q+1]), with
/// the last cell in each direction closed at 1. Counts are stored row-major.
struct ProcessGrid {
  std::vector<double> r1_breaks;
  std::vector<double> r2_breaks;
  std::vector<std::uint32_t> cell_counts;
  std::size_t m = 0;

  std::size_t cells_r1() const { return r1_breaks.size() - 1; }
  std::size_t cells_r2() const { return r2_breaks.size() - 1; }
  std::uint32_t count(std::size_t p, std::size_t q) const {
    return cell_counts[p * cells_r2() + q];
  }
};

/// Grid of the lag-j pairs (u_k, u_{k-j}). Memory is quadratic in n; meant
/// for inspection and tests. The statistics below never materialize it.
ProcessGrid make_process_grid(std::span<const double> u, std::size_t lag);

/// (1/sqrt(n-j)) sum_{k>j} [ I(u_k <= r1) I(u_{k-j} <= r2) - r1 r2 ].
double v2_eval(std::span<const double> u, std::size_t lag, double r1, double r2);

/// Exact integral of the squared lag-j process over the unit square.
double cvm_d2(std::span<const double> u, std::size_t lag);
/// Exact supremum of the absolute lag-j process over the unit square.
double ks_d2(std::span<const double> u, std::size_t lag);
/// Both norms from a single sweep.
ProcessNorms d2_norms(std::span<const double> u, std::size_t lag);

/// Exact norms of (1/sqrt(m)) sum_i [ I(x_i <= r1) I(y_i <= r2) - r1 r2 ].
ProcessNorms pair_process_norms(std::span<const double> x, std::span<const double> y);

/// One-parameter process (1/sqrt(n)) sum_k [ I(u_k <= r) - r ].
ProcessNorms d1_stats(std::span<const double> u);

/// p-parameter process over consecutive p-tuples, r[0] paired with the most
/// recent element. Normalized by the number of tuples, n - p + 1.
double vp_eval(std::span<const double> u, std::span<const double> r);

/// CvM norm of the p-parameter process, exact (closed-form pairwise sum,
/// O(n^2 p)).
double dp_cvm(std::span<const double> u, std::size_t p);
/// KS norm of the p-parameter process evaluated only at the sample tuples and
/// their left limits. A lower bound of the true supremum for p > 2.
double dp_ks_approx(std::span<const double> u, std::size_t p);

struct LagAggregates {
  std::vector<ProcessNorms> per_lag;  // lags 1..k
  double adj = 0.0;   // sum of CvM over lags
  double mdj = 0.0;   // max of KS over lags
  double adj0 = 0.0;  // adj + D1 CvM
  double mdj0 = 0.0;  // max(mdj, D1 KS)
};

/// Lag-aggregated statistics for lags 1..k_max.
LagAggregates adj_mdj(std::span<const double> u, std::size_t k_max);

struct BaiChenCombos {
  double max = 0.0;
  double sum = 0.0;
  double pool = 0.0;
};

/// Per-coordinate one-parameter KS statistics of u_{(t-1)d + l}, combined.
BaiChenCombos bai_chen_combos(std::span<const double> u, std::size_t d);

/// Norms of the row-wise d-parameter process over U^t = (u_{(t-1)d+1}, ..,
/// u_{td}). Exact for d <= 2; for d > 2 CvM is exact and KS is evaluated on
/// the sample points.
ProcessNorms patton_s(std::span<const double> u, std::size_t d);

}  // namespace mvspec
