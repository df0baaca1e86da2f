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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mvspec/models.hpp"
#include "mvspec/series.hpp"
#include "mvspec/statistics.hpp"

namespace mvspec {

struct BootstrapConfig {
  std::size_t B = 999;
  std::uint64_t seed = 1;
  /// Fresh simulations tried after a replicate fails to estimate.
  std::size_t max_redraws = 5;
  std::vector<double> alpha_levels{0.01, 0.05, 0.10};
  StatisticsConfig statistics;
  /// Stacking order; empty means the natural column order.
  Permutation order;
  std::size_t burn_in = 50;
  unsigned workers = 1;
};

struct BootstrapResult {
  FittedModel fitted;
  StatisticSet observed;
  /// Successful replicates, in replicate-index order.
  std::vector<StatisticSet> replicates;
  std::map<std::string, double> p_values;
  std::size_t n_failures = 0;
  /// Redraws consumed by each replicate (index 0 is replicate 1).
  std::vector<std::size_t> redraw_log;
  std::vector<std::string> warnings;
  double seconds = 0.0;

  /// True when p <= alpha.
  bool rejects(const std::string& statistic, double alpha) const;
};

/// (1 + #{r >= observed}) / (B + 1). Throws on an empty replicate set.
double p_value(double observed, std::span<const double> replicates);

/// Stacked PITs of `data` under (family, theta) in the given order.
PitSequence pit_sequence(const ModelFamily& family, const ModelParams& theta,
                         const SeriesMatrix& data, const Permutation& order);

/// Statistics of `data` evaluated at a fixed parameter.
StatisticSet statistics_at(const ModelFamily& family, const ModelParams& theta,
                           const SeriesMatrix& data, const Permutation& order,
                           const StatisticsConfig& config);

/// Parametric bootstrap: fit, simulate B series under the fit, refit each,
/// recompute the statistics, and convert ranks into p-values. Replicate i
/// draws from stream derive_seed(seed, i), so results do not depend on the
/// worker count. Estimation errors on `data` itself propagate.
BootstrapResult run_bootstrap(const ModelFamily& family, const SeriesMatrix& data,
                              const BootstrapConfig& config);

}  // namespace mvspec
