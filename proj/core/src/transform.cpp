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

#include "mvspec/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace mvspec {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile needs p in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double student_t_cdf(double x, double dof) {
  return boost::math::cdf(boost::math::students_t_distribution<double>(dof), x);
}

ConditionalFactor ConditionalFactor::normal(double location, double scale) {
  ConditionalFactor f{Law::normal, location, scale, 0.0};
  f.validate();
  return f;
}

ConditionalFactor ConditionalFactor::student_t(double location, double scale, double dof) {
  ConditionalFactor f{Law::student_t, location, scale, dof};
  f.validate();
  return f;
}

void ConditionalFactor::validate() const {
  if (!std::isfinite(location) || !(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("conditional factor needs finite location and scale > 0");
  }
  if (law == Law::student_t && !(dof > 0.0)) {
    throw std::invalid_argument("student-t factor needs dof > 0");
  }
}

double ConditionalFactor::cdf(double z) const {
  const double x = (z - location) / scale;
  return law == Law::normal ? normal_cdf(x) : student_t_cdf(x, dof);
}

double ConditionalFactor::log_density(double z) const {
  const double x = (z - location) / scale;
  if (law == Law::normal) {
    return -0.5 * std::log(2.0 * std::numbers::pi) - std::log(scale) - 0.5 * x * x;
  }
  return std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
         0.5 * std::log(dof * std::numbers::pi) - std::log(scale) -
         0.5 * (dof + 1.0) * std::log1p(x * x / dof);
}

double pit_step(double z, const ConditionalFactor& factor) {
  if (!std::isfinite(z)) throw std::invalid_argument("pit_step: non-finite observation");
  factor.validate();
  return std::clamp(factor.cdf(z), kPitFloor, 1.0 - kPitFloor);
}

std::pair<ConditionalFactor, ConditionalFactor> bivariate_normal_factors(
    const Eigen::Vector2d& y, const Eigen::Vector2d& mu, const Eigen::Matrix2d& sigma) {
  const double s11 = sigma(0, 0);
  const double s12 = sigma(0, 1);
  const double s22 = sigma(1, 1);
  if (sigma(1, 0) != s12 || !(s11 > 0.0) || !(s11 * s22 - s12 * s12 > 0.0)) {
    throw NotSpdError("bivariate normal: sigma is not symmetric positive definite");
  }
  const double beta = s12 / s11;
  const double resid_var = s22 - s12 * s12 / s11;
  return {ConditionalFactor::normal(mu(0), std::sqrt(s11)),
          ConditionalFactor::normal(mu(1) + beta * (y(0) - mu(0)), std::sqrt(resid_var))};
}

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0) {
    throw DimensionError("covariance must be square and non-empty");
  }
  if (!sigma.isApprox(sigma.transpose(), 1e-12) || !sigma.allFinite()) {
    throw NotSpdError("covariance is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw NotSpdError("covariance is not positive definite");
  Eigen::MatrixXd lower = llt.matrixL();
  for (Eigen::Index i = 0; i < lower.rows(); ++i) {
    if (!(lower(i, i) > 0.0)) throw NotSpdError("covariance is not positive definite");
  }
  return lower;
}

void append_elliptical_factors(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                               const Eigen::MatrixXd& chol_lower, double dof,
                               std::vector<ConditionalFactor>& out) {
  const Eigen::Index d = y.size();
  // y = mu + L e; the conditional of y_l given y_<l has mean mu_l + sum L_li e_i
  // and Schur-complement standard deviation L_ll.
  Eigen::VectorXd e(d);
  double q = 0.0;
  for (Eigen::Index l = 0; l < d; ++l) {
    double mean = mu(l);
    for (Eigen::Index i = 0; i < l; ++i) mean += chol_lower(l, i) * e(i);
    const double sd = chol_lower(l, l);
    if (dof > 0.0) {
      const double df = dof + static_cast<double>(l);
      out.push_back(ConditionalFactor{ConditionalFactor::Law::student_t, mean,
                                      sd * std::sqrt((dof + q) / df), df});
    } else {
      out.push_back(ConditionalFactor{ConditionalFactor::Law::normal, mean, sd, 0.0});
    }
    e(l) = (y(l) - mean) / sd;
    q += e(l) * e(l);
  }
}

std::vector<ConditionalFactor> multivariate_normal_factors(const Eigen::VectorXd& y,
                                                           const Eigen::VectorXd& mu,
                                                           const Eigen::MatrixXd& sigma) {
  if (y.size() != mu.size() || sigma.rows() != y.size()) {
    throw DimensionError("multivariate normal: dimension mismatch");
  }
  std::vector<ConditionalFactor> out;
  out.reserve(static_cast<std::size_t>(y.size()));
  append_elliptical_factors(y, mu, cholesky_lower(sigma), 0.0, out);
  return out;
}

std::vector<ConditionalFactor> multivariate_t_factors(const Eigen::VectorXd& y,
                                                      const Eigen::VectorXd& mu,
                                                      const Eigen::MatrixXd& sigma,
                                                      double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("multivariate t: dof must be positive");
  if (y.size() != mu.size() || sigma.rows() != y.size()) {
    throw DimensionError("multivariate t: dimension mismatch");
  }
  std::vector<ConditionalFactor> out;
  out.reserve(static_cast<std::size_t>(y.size()));
  append_elliptical_factors(y, mu, cholesky_lower(sigma), dof, out);
  return out;
}

PitSequence rosenblatt(std::span<const ConditionalFactor> factors, const StackedSeries& z) {
  if (factors.size() != z.z.size()) {
    throw DimensionError("rosenblatt: " + std::to_string(factors.size()) +
                         " factors for " + std::to_string(z.z.size()) + " observations");
  }
  std::vector<double> u(z.z.size());
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = pit_step(z.z[k], factors[k]);
  return PitSequence(std::move(u));
}

std::vector<double> normal_scores(std::span<const double> u) {
  std::vector<double> x(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    x[k] = normal_quantile(std::clamp(u[k], kPitFloor, 1.0 - kPitFloor));
  }
  return x;
}

}  // namespace mvspec
