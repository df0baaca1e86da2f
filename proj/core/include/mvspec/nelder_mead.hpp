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
#include <functional>

#include <Eigen/Dense>

namespace mvspec {

struct NelderMeadOptions {
  /// Iteration cap for a single simplex run.
  std::size_t max_iterations = 2000;
  /// Stop when (f_worst - f_best) <= rel_tolerance * |f_best| + abs_tolerance.
  double rel_tolerance = 1e-9;
  double abs_tolerance = 1e-12;
  /// Per-coordinate initial simplex offsets; empty means 0.1 * max(|x0_i|, 1).
  Eigen::VectorXd initial_step;
  /// Fresh simplices built around the incumbent after a converged run. The
  /// search ends once a restart improves the objective by less than the tolerance.
  std::size_t max_restarts = 3;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
};

/// Minimizes `objective` with the adaptive-coefficient Nelder-Mead simplex.
/// Non-finite objective values are treated as +infinity.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& x0,
                             const NelderMeadOptions& options = {});

}  // namespace mvspec
