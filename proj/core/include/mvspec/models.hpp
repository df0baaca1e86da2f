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
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mvspec/rng.hpp"
#include "mvspec/series.hpp"
#include "mvspec/transform.hpp"

namespace mvspec {

/// Estimation could not produce a usable parameter (singular design,
/// degenerate covariance, too few rows).
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind {
  iid_normal_diag,  // N(mu, Sigma) with diagonal Sigma, no dynamics
  iid_normal_full,  // N(mu, Sigma), no dynamics
  iid_t,            // t_nu(mu, Sigma) with Sigma a scale matrix
  var1_normal,      // Y_t = c + A Y_{t-1} + e_t, e_t ~ N(0, Sigma)
  lstar2_normal,    // bivariate logistic smooth transition AR, normal errors
  lstar2_t,         // same mean, t_nu errors with scale matrix Sigma
};

struct ModelFamily {
  ModelKind kind = ModelKind::iid_normal_full;
  std::size_t d = 2;
  double fixed_dof = 0.0;  // t families only

  /// Accepts the kind names above plus the null aliases h0a, h0b and h0nar.
  static ModelFamily parse(std::string_view name, std::size_t d, double dof = 5.0);

  std::string name() const;
  /// Number of leading rows consumed as lags.
  std::size_t lags() const;
  bool student_t() const { return kind == ModelKind::iid_t || kind == ModelKind::lstar2_t; }
  void validate() const;
};

/// Parameter vector of a family. Unused members stay empty.
struct ModelParams {
  Eigen::VectorXd mu;     // iid mean or VAR intercept
  Eigen::MatrixXd ar;     // VAR(1) coefficient matrix
  Eigen::VectorXd b;      // LSTAR b1..b11
  Eigen::MatrixXd sigma;  // covariance (normal) or scale (t)
  double dof = 0.0;
};

void validate_params(const ModelFamily& family, const ModelParams& theta);

/// Flat key/value form: mu1.., a11.., b1..b11, sigma11, sigma12, sigma22, .., dof.
std::vector<std::pair<std::string, double>> named_parameters(const ModelFamily& family,
                                                             const ModelParams& theta);
ModelParams params_from_named(const ModelFamily& family,
                              const std::map<std::string, double>& values);

struct FittedModel {
  ModelFamily family;
  ModelParams theta;
  double loglik = 0.0;
  bool converged = true;
  std::size_t iterations = 0;
};

/// Starting lags for dynamic simulations. Empty `initial` means zeros.
struct InitPolicy {
  Eigen::VectorXd initial;
  std::size_t burn_in = 50;
};

/// Logistic transition weight (1 + exp(-b6 (x - b7)))^-1.
double lstar_weight(const Eigen::VectorXd& b, double y_lag2_first);

/// Conditional mean of the bivariate LSTAR model given Y_{t-1}, Y_{t-2}, Y_{t-3}.
Eigen::Vector2d lstar_mean(const Eigen::VectorXd& b, const Eigen::Vector2d& lag1,
                           const Eigen::Vector2d& lag2, const Eigen::Vector2d& lag3);

/// Recursive LSTAR draw. `dof <= 0` gives normal errors; `extra_alpha` adds
/// extra_alpha * Y_{t-2,2} to the first mean equation.
SeriesMatrix simulate_lstar(const Eigen::VectorXd& b, const Eigen::MatrixXd& sigma,
                            double dof, double extra_alpha, std::size_t T,
                            const InitPolicy& init, RngStream& rng);

SeriesMatrix simulate(const ModelFamily& family, const ModelParams& theta, std::size_t T,
                      const InitPolicy& init, RngStream& rng);

FittedModel estimate(const ModelFamily& family, const SeriesMatrix& data);

/// Conditional factors for rows lags()..T-1, stacked in `order`.
std::vector<ConditionalFactor> conditional_factors(const ModelFamily& family,
                                                   const ModelParams& theta,
                                                   const SeriesMatrix& data,
                                                   const Permutation& order);

/// The rows covered by conditional_factors(), stacked in `order`.
StackedSeries stack_effective(const ModelFamily& family, const SeriesMatrix& data,
                              const Permutation& order);

/// Conditional log likelihood over rows lags()..T-1.
double log_likelihood(const ModelFamily& family, const ModelParams& theta,
                      const SeriesMatrix& data);

/// Unconstrained packing of an SPD matrix: lower Cholesky entries with the
/// diagonal on the log scale.
Eigen::VectorXd pack_spd(const Eigen::MatrixXd& sigma);
Eigen::MatrixXd unpack_spd(const Eigen::VectorXd& packed, std::size_t d);

}  // namespace mvspec
