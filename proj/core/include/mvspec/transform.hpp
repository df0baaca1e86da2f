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

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mvspec/series.hpp"

namespace mvspec {

/// Covariance or scale matrix that is not symmetric positive definite.
class NotSpdError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Scalar distribution functions. Normal via erfc; Student-t via the
// regularized incomplete beta.
double normal_cdf(double x);
double normal_quantile(double p);
double student_t_cdf(double x, double dof);

/// PIT values are kept inside [kPitFloor, 1 - kPitFloor] so their normal
/// scores stay finite.
inline constexpr double kPitFloor = 1e-15;

/// One univariate conditional law for one element of the stacked series.
struct ConditionalFactor {
  enum class Law { normal, student_t };

  Law law = Law::normal;
  double location = 0.0;
  double scale = 1.0;
  double dof = 0.0;  // student_t only

  static ConditionalFactor normal(double location, double scale);
  static ConditionalFactor student_t(double location, double scale, double dof);

  /// Throws std::invalid_argument unless scale > 0 (and dof > 0 for t).
  void validate() const;

  double cdf(double z) const;
  double log_density(double z) const;
};

/// CDF of `factor` at z, clamped to [kPitFloor, 1 - kPitFloor].
double pit_step(double z, const ConditionalFactor& factor);

/// Conditional factorization of a bivariate normal by projecting the second
/// coordinate on the first.
std::pair<ConditionalFactor, ConditionalFactor> bivariate_normal_factors(
    const Eigen::Vector2d& y, const Eigen::Vector2d& mu, const Eigen::Matrix2d& sigma);

/// Sequential conditionals Y_l | Y_1..Y_{l-1} of N(mu, sigma), any dimension.
std::vector<ConditionalFactor> multivariate_normal_factors(const Eigen::VectorXd& y,
                                                           const Eigen::VectorXd& mu,
                                                           const Eigen::MatrixXd& sigma);

/// Sequential conditionals of the multivariate t with location mu, scale
/// matrix sigma and `dof` degrees of freedom. Factor l (1-based) is a t with
/// dof + l - 1 degrees of freedom.
std::vector<ConditionalFactor> multivariate_t_factors(const Eigen::VectorXd& y,
                                                      const Eigen::VectorXd& mu,
                                                      const Eigen::MatrixXd& sigma,
                                                      double dof);

/// Lower Cholesky factor of sigma; throws NotSpdError.
Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& sigma);

/// Appends the sequential conditionals of an elliptical law given its lower
/// Cholesky factor. `dof <= 0` selects the normal law. Used by the model code
/// to avoid refactoring the same matrix at every time step.
void append_elliptical_factors(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                               const Eigen::MatrixXd& chol_lower, double dof,
                               std::vector<ConditionalFactor>& out);

/// u_k = pit_step(z_k, factors[k]).
PitSequence rosenblatt(std::span<const ConditionalFactor> factors, const StackedSeries& z);

/// Normal scores Phi^{-1}(u_k).
std::vector<double> normal_scores(std::span<const double> u);

}  // namespace mvspec
