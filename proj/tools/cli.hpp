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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mvspec::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kEstimationFailure = 2 };

/// Everything a run needs. Defaults apply first, then a config file, then
/// the MVSPEC_SEED / MVSPEC_WORKERS environment variables, then flags.
struct RunConfig {
  std::string command;
  std::string model = "iid_normal_full";
  double dof = 5.0;
  std::string data_path;
  std::string order;  // one-based, e.g. "2,1"; empty = natural order
  std::size_t B = 999;
  std::uint64_t seed = 1;
  std::size_t lags = 2;
  std::vector<double> levels{0.01, 0.05, 0.10};
  std::string output_path;
  unsigned workers = 0;  // 0 = all cores
  std::size_t max_redraws = 5;
  std::size_t burn_in = 50;
  std::string theta_path;
  // simulate / mc
  std::string dgp;
  std::vector<double> alphas{0.0};
  std::size_t T = 100;
  std::size_t reps = 200;
  std::string null_model;  // empty = the DGP block's own null
  std::string table_path;
};

/// Runs one command line; writes reports to `out` (or files) and
/// diagnostics to `err`. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mvspec::cli
