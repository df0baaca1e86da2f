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

#include "mvspec/bootstrap.hpp"

#include <chrono>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "mvspec/parallel.hpp"
#include "mvspec/rng.hpp"

namespace mvspec {
namespace {

struct ReplicateOutcome {
  std::optional<StatisticSet> stats;
  std::size_t redraws = 0;
};

ReplicateOutcome run_replicate(const ModelFamily& family, const FittedModel& fitted,
                               std::size_t T, const InitPolicy& init, const Permutation& order,
                               const BootstrapConfig& config, std::uint64_t stream_seed) {
  RngStream rng(stream_seed);
  ReplicateOutcome out;
  for (std::size_t attempt = 0; attempt <= config.max_redraws; ++attempt) {
    out.redraws = attempt;
    try {
      const SeriesMatrix sim = simulate(family, fitted.theta, T, init, rng);
      const FittedModel refit = estimate(family, sim);
      if (!refit.converged) continue;
      out.stats = statistics_at(family, refit.theta, sim, order, config.statistics);
      return out;
    } catch (const EstimationError&) {
    } catch (const NotSpdError&) {
    }
  }
  return out;
}

}  // namespace

bool BootstrapResult::rejects(const std::string& statistic, double alpha) const {
  auto it = p_values.find(statistic);
  if (it == p_values.end()) throw std::out_of_range("no p-value for " + statistic);
  return it->second <= alpha;
}

double p_value(double observed, std::span<const double> replicates) {
  if (replicates.empty()) throw std::invalid_argument("p_value: no replicates");
  std::size_t at_least = 0;
  for (double r : replicates) at_least += r >= observed;
  return (1.0 + static_cast<double>(at_least)) / (static_cast<double>(replicates.size()) + 1.0);
}

PitSequence pit_sequence(const ModelFamily& family, const ModelParams& theta,
                         const SeriesMatrix& data, const Permutation& order) {
  const auto factors = conditional_factors(family, theta, data, order);
  return rosenblatt(factors, stack_effective(family, data, order));
}

StatisticSet statistics_at(const ModelFamily& family, const ModelParams& theta,
                           const SeriesMatrix& data, const Permutation& order,
                           const StatisticsConfig& config) {
  const PitSequence u = pit_sequence(family, theta, data, order);
  return compute_statistics(u.values(), family.d, config);
}

BootstrapResult run_bootstrap(const ModelFamily& family, const SeriesMatrix& data,
                              const BootstrapConfig& config) {
  if (config.B < 1) throw std::invalid_argument("bootstrap needs B >= 1");
  for (double a : config.alpha_levels) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("alpha levels must lie in (0,1)");
  }
  const auto started = std::chrono::steady_clock::now();
  const Permutation order = config.order.empty() ? identity_order(family.d) : config.order;
  validate_order(order, family.d);

  BootstrapResult result;
  result.fitted = estimate(family, data);
  if (!result.fitted.converged) {
    result.warnings.push_back("estimation on the original data did not converge");
  }
  result.observed = statistics_at(family, result.fitted.theta, data, order, config.statistics);

  InitPolicy init;
  init.initial = data.values().colwise().mean().transpose();
  init.burn_in = config.burn_in;

  std::vector<ReplicateOutcome> outcomes(config.B);
  parallel_for(config.B, config.workers, [&](std::size_t i) {
    outcomes[i] = run_replicate(family, result.fitted, data.rows(), init, order, config,
                                derive_seed(config.seed, i + 1));
  });

  result.redraw_log.reserve(config.B);
  for (auto& o : outcomes) {
    result.redraw_log.push_back(o.redraws);
    if (o.stats) {
      result.replicates.push_back(std::move(*o.stats));
    } else {
      ++result.n_failures;
    }
  }
  if (result.replicates.empty()) {
    throw EstimationError("every bootstrap replicate failed to estimate");
  }
  if (static_cast<double>(result.n_failures) > 0.02 * static_cast<double>(config.B)) {
    std::ostringstream msg;
    msg << result.n_failures << " of " << config.B
        << " replicates dropped after exhausting redraws; consider a larger B";
    result.warnings.push_back(msg.str());
  }

  std::vector<double> column(result.replicates.size());
  for (const auto& [name, value] : result.observed) {
    for (std::size_t i = 0; i < column.size(); ++i) column[i] = result.replicates[i].at(name);
    result.p_values[name] = p_value(value, column);
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace mvspec
