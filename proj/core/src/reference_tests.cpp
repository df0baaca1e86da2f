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

#include "mvspec/reference_tests.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mvspec {
namespace {

std::vector<double> centered(std::span<const double> x, double& ss) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  std::vector<double> c(x.size());
  ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    c[i] = x[i] - mean;
    ss += c[i] * c[i];
  }
  if (!(ss > 0.0)) throw std::invalid_argument("series has zero variance");
  return c;
}

double acf(const std::vector<double>& c, double ss, std::size_t lag) {
  double s = 0.0;
  for (std::size_t t = lag; t < c.size(); ++t) s += c[t] * c[t - lag];
  return s / ss;
}

}  // namespace

double autocorrelation(std::span<const double> x, std::size_t lag) {
  if (x.size() <= lag) throw std::invalid_argument("autocorrelation: series too short");
  double ss = 0.0;
  const auto c = centered(x, ss);
  return acf(c, ss, lag);
}

double ljung_box(std::span<const double> x, std::size_t lags) {
  if (lags < 1 || x.size() <= lags) {
    throw std::invalid_argument("ljung_box: series must be longer than the lag count");
  }
  double ss = 0.0;
  const auto c = centered(x, ss);
  const double n = static_cast<double>(x.size());
  double q = 0.0;
  for (std::size_t j = 1; j <= lags; ++j) {
    const double r = acf(c, ss, j);
    q += r * r / (n - static_cast<double>(j));
  }
  return n * (n + 2.0) * q;
}

double jarque_bera(std::span<const double> x) {
  if (x.size() < 4) throw std::invalid_argument("jarque_bera: need at least 4 observations");
  double ss = 0.0;
  const auto c = centered(x, ss);
  const double n = static_cast<double>(x.size());
  double m3 = 0.0;
  double m4 = 0.0;
  for (double v : c) {
    m3 += v * v * v;
    m4 += v * v * v * v;
  }
  const double m2 = ss / n;
  m3 /= n;
  m4 /= n;
  const double skew = m3 / (m2 * std::sqrt(m2));
  const double kurt = m4 / (m2 * m2);
  return n / 6.0 * (skew * skew + 0.25 * (kurt - 3.0) * (kurt - 3.0));
}

}  // namespace mvspec
