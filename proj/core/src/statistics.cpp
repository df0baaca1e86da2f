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

#include "mvspec/statistics.hpp"

#include <algorithm>
#include <stdexcept>

#include "mvspec/empirical.hpp"
#include "mvspec/reference_tests.hpp"
#include "mvspec/transform.hpp"

namespace mvspec {

StatisticSet compute_statistics(std::span<const double> u, std::size_t d,
                                const StatisticsConfig& config) {
  if (u.size() <= config.k_max) {
    throw std::invalid_argument("PIT sequence too short for lag " + std::to_string(config.k_max));
  }
  StatisticSet out;
  const ProcessNorms d1 = d1_stats(u);
  out["D1_CvM"] = d1.cvm;
  out["D1_KS"] = d1.ks;
  if (config.k_max >= 1) {
    const LagAggregates agg = adj_mdj(u, config.k_max);
    for (std::size_t j = 1; j <= config.k_max; ++j) {
      const std::string tag = "D2_" + std::to_string(j);
      out[tag + "_CvM"] = agg.per_lag[j - 1].cvm;
      out[tag + "_KS"] = agg.per_lag[j - 1].ks;
    }
    const std::string k = std::to_string(config.k_max);
    out["ADJ_" + k] = agg.adj;
    out["MDJ_" + k] = agg.mdj;
    out["ADJ0_" + k] = agg.adj0;
    out["MDJ0_" + k] = agg.mdj0;
  }
  if (!config.lbq_lags.empty() || config.jarque_bera) {
    const std::vector<double> scores = normal_scores(u);
    for (std::size_t lag : config.lbq_lags) {
      if (lag >= 1 && lag < scores.size()) out["LBQ_" + std::to_string(lag)] = ljung_box(scores, lag);
    }
    if (config.jarque_bera && scores.size() >= 4) out["JB"] = jarque_bera(scores);
  }
  if (d >= 1 && u.size() % d == 0) {
    if (config.bai_chen) {
      const BaiChenCombos bc = bai_chen_combos(u, d);
      out["BC_max"] = bc.max;
      out["BC_sum"] = bc.sum;
      out["BC_pool"] = bc.pool;
    }
    if (config.patton) {
      const ProcessNorms s = patton_s(u, d);
      out["S_CvM"] = s.cvm;
      out["S_KS"] = s.ks;
    }
  }
  if (!config.only.empty()) {
    std::erase_if(out, [&](const auto& kv) {
      return std::find(config.only.begin(), config.only.end(), kv.first) == config.only.end();
    });
  }
  return out;
}

std::vector<std::string> core_statistic_names() {
  return {"D1_CvM", "D2_1_CvM", "D2_2_CvM", "D1_KS", "D2_1_KS", "D2_2_KS"};
}

}  // namespace mvspec
