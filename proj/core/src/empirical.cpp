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

#include "mvspec/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mvspec {
namespace {

void require_lag(std::size_t n, std::size_t lag) {
  if (lag < 1) throw std::invalid_argument("lag must be at least 1");
  if (n <= lag) {
    throw std::invalid_argument("need more than " + std::to_string(lag) +
                                " observations, got " + std::to_string(n));
  }
}

void require_divisible(std::size_t n, std::size_t d) {
  if (d == 0 || n == 0 || n % d != 0) {
    throw std::invalid_argument("sequence length " + std::to_string(n) +
                                " is not a positive multiple of " + std::to_string(d));
  }
}

// Sorted unique values plus the end points 0 and 1. Ties merge into one break.
std::vector<double> breaks_of(std::span<const double> v) {
  std::vector<double> b(v.begin(), v.end());
  b.push_back(0.0);
  b.push_back(1.0);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

std::vector<std::uint32_t> ranks_in(std::span<const double> v, const std::vector<double>& breaks) {
  std::vector<std::uint32_t> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    r[i] = static_cast<std::uint32_t>(std::lower_bound(breaks.begin(), breaks.end(), v[i]) -
                                      breaks.begin());
  }
  return r;
}

void require_unit(std::span<const double> v) {
  for (double x : v) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("PIT values must lie in [0,1]");
  }
}

struct Lagged {
  std::span<const double> current;
  std::span<const double> lagged;
};

Lagged lag_pairs(std::span<const double> u, std::size_t lag) {
  require_lag(u.size(), lag);
  const std::size_t m = u.size() - lag;
  return {u.subspan(lag, m), u.subspan(0, m)};
}

// Exact CvM over [0,1]^p of (1/sqrt(m)) sum_i [prod_j I(x_ij <= r_j) - prod_j r_j]
// for m points stored as point(i)[j] = data[offset(i) + j].
template <typename Point>
double cvm_closed_form(std::size_t m, std::size_t p, Point point) {
  double cross = 0.0;
  double single = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double s = 1.0;
    for (std::size_t j = 0; j < p; ++j) s *= 0.5 * (1.0 - point(i, j) * point(i, j));
    single += s;
    for (std::size_t k = 0; k < m; ++k) {
      double c = 1.0;
      for (std::size_t j = 0; j < p; ++j) c *= 1.0 - std::max(point(i, j), point(k, j));
      cross += c;
    }
  }
  const double dm = static_cast<double>(m);
  return (cross - 2.0 * dm * single + dm * dm * std::pow(3.0, -static_cast<double>(p))) / dm;
}

template <typename Point>
double ks_on_sample(std::size_t m, std::size_t p, Point point) {
  const double sm = std::sqrt(static_cast<double>(m));
  double best = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t at = 0;
    std::size_t below = 0;
    double prod = 1.0;
    for (std::size_t j = 0; j < p; ++j) prod *= point(i, j);
    for (std::size_t k = 0; k < m; ++k) {
      bool le = true;
      bool lt = true;
      for (std::size_t j = 0; j < p; ++j) {
        le = le && point(k, j) <= point(i, j);
        lt = lt && point(k, j) < point(i, j);
      }
      at += le;
      below += lt;
    }
    best = std::max({best, std::abs(static_cast<double>(at) / sm - sm * prod),
                     std::abs(static_cast<double>(below) / sm - sm * prod)});
  }
  return best;
}

}  // namespace

ProcessGrid make_process_grid(std::span<const double> u, std::size_t lag) {
  const Lagged pairs = lag_pairs(u, lag);
  require_unit(u);
  ProcessGrid g;
  g.m = pairs.current.size();
  g.r1_breaks = breaks_of(pairs.current);
  g.r2_breaks = breaks_of(pairs.lagged);
  g.cell_counts.assign(g.cells_r1() * g.cells_r2(), 0);
  const auto rx = ranks_in(pairs.current, g.r1_breaks);
  const auto ry = ranks_in(pairs.lagged, g.r2_breaks);
  for (std::size_t i = 0; i < g.m; ++i) {
    // A coordinate equal to 1 lands in the closed last cell.
    const std::size_t p = std::min<std::size_t>(rx[i], g.cells_r1() - 1);
    const std::size_t q = std::min<std::size_t>(ry[i], g.cells_r2() - 1);
    ++g.cell_counts[p * g.cells_r2() + q];
  }
  return g;
}

double v2_eval(std::span<const double> u, std::size_t lag, double r1, double r2) {
  const Lagged pairs = lag_pairs(u, lag);
  const std::size_t m = pairs.current.size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    count += (pairs.current[i] <= r1) && (pairs.lagged[i] <= r2);
  }
  const double dm = static_cast<double>(m);
  return (static_cast<double>(count) - dm * r1 * r2) / std::sqrt(dm);
}

ProcessNorms pair_process_norms(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) {
    throw std::invalid_argument("pair process needs two equal, non-empty coordinate arrays");
  }
  require_unit(x);
  require_unit(y);
  const std::size_t m = x.size();
  const std::vector<double> a = breaks_of(x);
  const std::vector<double> b = breaks_of(y);
  const auto rx = ranks_in(x, a);
  const auto ry = ranks_in(y, b);

  // Bucket the pairs by their r1 rank so the sweep adds them in order.
  std::vector<std::uint32_t> start(a.size() + 1, 0);
  for (auto p : rx) ++start[p + 1];
  for (std::size_t p = 0; p < a.size(); ++p) start[p + 1] += start[p];
  std::vector<std::uint32_t> by_row(m);
  {
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < m; ++i) by_row[fill[rx[i]]++] = ry[i];
  }

  // Per-column integrals of r2 and r2^2 over each cell [b_q, b_{q+1}).
  const std::size_t Q = b.size();
  std::vector<double> width(Q - 1), p2(Q - 1), q2(Q - 1);
  for (std::size_t q = 0; q + 1 < Q; ++q) {
    width[q] = b[q + 1] - b[q];
    p2[q] = 0.5 * (b[q + 1] * b[q + 1] - b[q] * b[q]);
    q2[q] = (b[q + 1] * b[q + 1] * b[q + 1] - b[q] * b[q] * b[q]) / 3.0;
  }

  const double dm = static_cast<double>(m);
  const double sm = std::sqrt(dm);
  std::vector<std::uint32_t> column(Q, 0);
  double cvm = 0.0;
  double ks = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) {
    for (std::uint32_t i = start[p]; i < start[p + 1]; ++i) ++column[by_row[i]];
    const bool has_cell = p + 1 < a.size();
    const double a0 = a[p];
    const double a1 = has_cell ? a[p + 1] : a[p];
    const double w1 = a1 - a0;
    const double p1 = 0.5 * (a1 * a1 - a0 * a0);
    const double q1 = (a1 * a1 * a1 - a0 * a0 * a0) / 3.0;
    double row_cvm = 0.0;
    std::uint64_t count = 0;
    for (std::size_t q = 0; q < Q; ++q) {
      count += column[q];
      const double c = static_cast<double>(count);
      // Value at the corner (a_p, b_q); the process is right-continuous.
      ks = std::max(ks, std::abs(c / sm - sm * a0 * b[q]));
      if (has_cell && q + 1 < Q) {
        // Left limit at the opposite corner of the cell.
        ks = std::max(ks, std::abs(c / sm - sm * a1 * b[q + 1]));
        row_cvm += c * c / dm * w1 * width[q] - 2.0 * c * p1 * p2[q] + dm * q1 * q2[q];
      }
    }
    cvm += row_cvm;
  }
  return {cvm, ks};
}

ProcessNorms d2_norms(std::span<const double> u, std::size_t lag) {
  const Lagged pairs = lag_pairs(u, lag);
  return pair_process_norms(pairs.current, pairs.lagged);
}

double cvm_d2(std::span<const double> u, std::size_t lag) { return d2_norms(u, lag).cvm; }
double ks_d2(std::span<const double> u, std::size_t lag) { return d2_norms(u, lag).ks; }

ProcessNorms d1_stats(std::span<const double> u) {
  if (u.empty()) throw std::invalid_argument("d1_stats: empty sequence");
  require_unit(u);
  std::vector<double> s(u.begin(), u.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double dist = 0.0;
  double w2 = 1.0 / (12.0 * n);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double dk = static_cast<double>(k);
    dist = std::max({dist, (dk + 1.0) / n - s[k], s[k] - dk / n});
    const double e = s[k] - (2.0 * dk + 1.0) / (2.0 * n);
    w2 += e * e;
  }
  return {w2, std::sqrt(n) * dist};
}

double vp_eval(std::span<const double> u, std::span<const double> r) {
  const std::size_t p = r.size();
  if (p < 1 || u.size() < p) throw std::invalid_argument("vp_eval: need n >= p >= 1");
  const std::size_t m = u.size() - p + 1;
  double prod = 1.0;
  for (double rj : r) prod *= rj;
  std::size_t count = 0;
  for (std::size_t k = p - 1; k < u.size(); ++k) {
    bool all = true;
    for (std::size_t j = 0; j < p && all; ++j) all = u[k - j] <= r[j];
    count += all;
  }
  const double dm = static_cast<double>(m);
  return (static_cast<double>(count) - dm * prod) / std::sqrt(dm);
}

double dp_cvm(std::span<const double> u, std::size_t p) {
  if (p < 1 || u.size() < p) throw std::invalid_argument("dp_cvm: need n >= p >= 1");
  require_unit(u);
  const std::size_t m = u.size() - p + 1;
  return cvm_closed_form(m, p, [&](std::size_t i, std::size_t j) { return u[i + p - 1 - j]; });
}

double dp_ks_approx(std::span<const double> u, std::size_t p) {
  if (p < 1 || u.size() < p) throw std::invalid_argument("dp_ks_approx: need n >= p >= 1");
  require_unit(u);
  const std::size_t m = u.size() - p + 1;
  return ks_on_sample(m, p, [&](std::size_t i, std::size_t j) { return u[i + p - 1 - j]; });
}

LagAggregates adj_mdj(std::span<const double> u, std::size_t k_max) {
  require_lag(u.size(), k_max);
  LagAggregates out;
  const ProcessNorms d1 = d1_stats(u);
  for (std::size_t j = 1; j <= k_max; ++j) {
    const ProcessNorms norms = d2_norms(u, j);
    out.per_lag.push_back(norms);
    out.adj += norms.cvm;
    out.mdj = std::max(out.mdj, norms.ks);
  }
  out.adj0 = d1.cvm + out.adj;
  out.mdj0 = std::max(d1.ks, out.mdj);
  return out;
}

BaiChenCombos bai_chen_combos(std::span<const double> u, std::size_t d) {
  require_divisible(u.size(), d);
  const std::size_t T = u.size() / d;
  BaiChenCombos out;
  std::vector<double> coord(T);
  for (std::size_t l = 0; l < d; ++l) {
    for (std::size_t t = 0; t < T; ++t) coord[t] = u[t * d + l];
    const double ks = d1_stats(coord).ks;
    out.max = std::max(out.max, ks);
    out.sum += ks;
  }
  out.pool = d1_stats(u).ks;
  return out;
}

ProcessNorms patton_s(std::span<const double> u, std::size_t d) {
  require_divisible(u.size(), d);
  if (d == 1) return d1_stats(u);
  const std::size_t T = u.size() / d;
  if (d == 2) {
    std::vector<double> first(T), second(T);
    for (std::size_t t = 0; t < T; ++t) {
      first[t] = u[2 * t];
      second[t] = u[2 * t + 1];
    }
    return pair_process_norms(first, second);
  }
  require_unit(u);
  auto point = [&](std::size_t t, std::size_t j) { return u[t * d + j]; };
  return {cvm_closed_form(T, d, point), ks_on_sample(T, d, point)};
}

}  // namespace mvspec
