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
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mvspec {

/// Statistic name -> value, e.g. "D1_CvM", "D2_1_KS", "ADJ_2", "LBQ_20", "JB".
using StatisticSet = std::map<std::string, double>;

struct StatisticsConfig {
  /// Largest lag j of the two-parameter processes; also the k of ADJ/MDJ.
  std::size_t k_max = 2;
  /// Ljung-Box lags on the normal scores; lags >= n are skipped.
  std::vector<std::size_t> lbq_lags{1, 2, 3, 20, 25};
  bool jarque_bera = true;
  bool bai_chen = true;
  bool patton = true;
  /// If non-empty, only these names are kept.
  std::vector<std::string> only;
};

/// All configured statistics for a stacked PIT sequence of a d-variate series.
StatisticSet compute_statistics(std::span<const double> u, std::size_t d,
                                const StatisticsConfig& config = {});

/// The six process statistics reported side by side in rejection tables.
std::vector<std::string> core_statistic_names();

}  // namespace mvspec
