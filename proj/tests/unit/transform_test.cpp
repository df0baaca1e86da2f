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

#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "mvspec/rng.hpp"
#include "mvspec/transform.hpp"
#include "oracles.hpp"

namespace mvspec {
namespace {

TEST(PitStep, MedianOfSymmetricLaws) {
  EXPECT_DOUBLE_EQ(pit_step(1.7, ConditionalFactor::normal(1.7, 3.0)), 0.5);
  for (double dof : {0.5, 1.0, 3.0, 30.0}) {
    EXPECT_DOUBLE_EQ(pit_step(-2.0, ConditionalFactor::student_t(-2.0, 0.4, dof)), 0.5);
  }
}

TEST(PitStep, OneSigmaAboveTheMean) {
  const double oracle = testing::normal_cdf_series(1.0);
  EXPECT_NEAR(oracle, 0.841345, 1e-6);
  EXPECT_NEAR(pit_step(3.0, ConditionalFactor::normal(2.0, 1.0)), oracle, 1e-14);
}

TEST(PitStep, NormalCdfAgainstSeries) {
  for (double x = -5.0; x <= 5.0; x += 0.37) {
    EXPECT_NEAR(normal_cdf(x), testing::normal_cdf_series(x), 1e-13) << x;
  }
}

TEST(PitStep, StudentTKnownValues) {
  // Cauchy and dof 2 have closed forms.
  for (double x : {-3.0, -0.5, 0.2, 4.0}) {
    EXPECT_NEAR(student_t_cdf(x, 1.0), 0.5 + std::atan(x) / std::numbers::pi, 1e-14);
    EXPECT_NEAR(student_t_cdf(x, 2.0), 0.5 + x / (2.0 * std::sqrt(2.0 + x * x)), 1e-14);
  }
}

TEST(PitStep, MonotoneAndAffineInvariant) {
  const ConditionalFactor n = ConditionalFactor::normal(0.3, 1.2);
  const ConditionalFactor t = ConditionalFactor::student_t(0.3, 1.2, 4.0);
  double prev_n = 0.0;
  double prev_t = 0.0;
  for (double z = -6.0; z <= 6.0; z += 0.25) {
    const double pn = pit_step(z, n);
    const double pt = pit_step(z, t);
    EXPECT_GT(pn, prev_n);
    EXPECT_GT(pt, prev_t);
    prev_n = pn;
    prev_t = pt;
    const double a = 2.5;
    const double b = -1.25;
    EXPECT_NEAR(pit_step(a * z + b, ConditionalFactor::normal(a * 0.3 + b, a * 1.2)), pn, 1e-14);
    EXPECT_NEAR(pit_step(a * z + b, ConditionalFactor::student_t(a * 0.3 + b, a * 1.2, 4.0)), pt,
                1e-14);
  }
}

TEST(PitStep, ClampsAndRejects) {
  const auto f = ConditionalFactor::normal(0.0, 1.0);
  EXPECT_EQ(pit_step(-100.0, f), kPitFloor);
  EXPECT_EQ(pit_step(100.0, f), 1.0 - kPitFloor);
  EXPECT_THROW(pit_step(std::nan(""), f), std::invalid_argument);
  EXPECT_THROW(pit_step(0.0, ConditionalFactor{ConditionalFactor::Law::normal, 0.0, -1.0, 0.0}),
               std::invalid_argument);
  EXPECT_THROW(ConditionalFactor::student_t(0.0, 1.0, 0.0), std::invalid_argument);
}

TEST(BivariateNormal, ProjectionExample) {
  Eigen::Matrix2d sigma;
  sigma << 1.0, 0.5, 0.5, 1.0;
  const auto [f1, f2] = bivariate_normal_factors({1.0, 0.5}, {0.0, 0.0}, sigma);
  EXPECT_NEAR(pit_step(1.0, f1), testing::normal_cdf_series(1.0), 1e-14);
  EXPECT_NEAR(pit_step(0.5, f2), 0.5, 1e-15);
  EXPECT_NEAR(f2.scale, std::sqrt(0.75), 1e-15);
}

TEST(BivariateNormal, IndependentMedians) {
  const auto [f1, f2] =
      bivariate_normal_factors({0.0, 0.0}, {0.0, 0.0}, Eigen::Matrix2d::Identity());
  EXPECT_EQ(pit_step(0.0, f1), 0.5);
  EXPECT_EQ(pit_step(0.0, f2), 0.5);
}

TEST(BivariateNormal, ZeroCovarianceDecouples) {
  Eigen::Matrix2d sigma;
  sigma << 2.0, 0.0, 0.0, 3.0;
  for (double y1 : {-4.0, 0.0, 9.0}) {
    const auto [f1, f2] = bivariate_normal_factors({y1, 1.0}, {0.5, -0.5}, sigma);
    EXPECT_DOUBLE_EQ(pit_step(1.0, f2), normal_cdf(1.5 / std::sqrt(3.0)));
  }
}

TEST(BivariateNormal, RejectsNonSpd) {
  Eigen::Matrix2d sigma;
  sigma << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(bivariate_normal_factors({0, 0}, {0, 0}, sigma), NotSpdError);
  sigma << 1.0, 0.2, 0.3, 1.0;
  EXPECT_THROW(multivariate_normal_factors(Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 0), sigma),
               NotSpdError);
}

TEST(MultivariateNormal, CholeskyRouteMatchesExplicitConditioning) {
  RngStream rng(5);
  Eigen::MatrixXd a(3, 3);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
  const Eigen::MatrixXd sigma = a * a.transpose() + Eigen::MatrixXd::Identity(3, 3);
  const Eigen::Vector3d mu(0.1, -0.2, 0.3);
  const Eigen::Vector3d y(1.0, 0.4, -2.0);
  const auto factors = multivariate_normal_factors(y, mu, sigma);
  ASSERT_EQ(factors.size(), 3u);
  for (Eigen::Index l = 0; l < 3; ++l) {
    double loc = mu(l);
    double var = sigma(l, l);
    if (l > 0) {
      const Eigen::MatrixXd s11 = sigma.topLeftCorner(l, l);
      const Eigen::RowVectorXd s21 = sigma.row(l).head(l);
      const Eigen::MatrixXd inv = s11.inverse();
      loc += (s21 * inv * (y.head(l) - mu.head(l)))(0);
      var -= (s21 * inv * s21.transpose())(0);
    }
    EXPECT_NEAR(factors[l].location, loc, 1e-12);
    EXPECT_NEAR(factors[l].scale, std::sqrt(var), 1e-12);
  }
  Eigen::Matrix2d s2 = sigma.topLeftCorner(2, 2);
  const auto [g1, g2] = bivariate_normal_factors(y.head(2), mu.head(2), s2);
  const auto two = multivariate_normal_factors(y.head(2), mu.head(2), s2);
  EXPECT_NEAR(g1.location, two[0].location, 1e-14);
  EXPECT_NEAR(g2.location, two[1].location, 1e-14);
  EXPECT_NEAR(g2.scale, two[1].scale, 1e-14);
}

TEST(MultivariateT, UnivariateHasNoConditioning) {
  Eigen::MatrixXd s(1, 1);
  s << 4.0;
  const auto f = multivariate_t_factors(Eigen::VectorXd::Constant(1, 9.0),
                                        Eigen::VectorXd::Constant(1, 1.0), s, 3.0);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].law, ConditionalFactor::Law::student_t);
  EXPECT_EQ(f[0].location, 1.0);
  EXPECT_EQ(f[0].scale, 2.0);
  EXPECT_EQ(f[0].dof, 3.0);
}

TEST(MultivariateT, CenteredInput) {
  Eigen::Matrix2d s;
  s << 2.0, 0.6, 0.6, 1.0;
  const auto f = multivariate_t_factors(Eigen::Vector2d(1, 2), Eigen::Vector2d(1, 2), s, 5.0);
  EXPECT_DOUBLE_EQ(f[1].location, 2.0);
  EXPECT_NEAR(f[1].scale * f[1].scale, 5.0 / 6.0 * (1.0 - 0.36 / 2.0), 1e-14);
  EXPECT_EQ(f[1].dof, 6.0);
}

TEST(MultivariateT, HandExample) {
  const auto f = multivariate_t_factors(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 0),
                                        Eigen::Matrix2d::Identity(), 5.0);
  EXPECT_DOUBLE_EQ(f[1].location, 0.0);
  EXPECT_NEAR(f[1].scale, 1.0, 1e-15);
  EXPECT_EQ(f[1].dof, 6.0);
  EXPECT_THROW(multivariate_t_factors(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 0),
                                      Eigen::Matrix2d::Identity(), 0.0),
               std::invalid_argument);
}

// Conditional CDF of Y2 given Y1 by quadrature of the joint bivariate-t density.
double numeric_conditional_t_cdf(double y1, double y2, const Eigen::Vector2d& mu,
                                 const Eigen::Matrix2d& s, double nu) {
  const Eigen::Matrix2d inv = s.inverse();
  auto joint = [&](double v) {
    const Eigen::Vector2d e(y1 - mu(0), v - mu(1));
    return std::pow(1.0 + e.dot(inv * e) / nu, -(nu + 2.0) / 2.0);
  };
  // Simpson on theta with v = tan(theta).
  auto integrate = [&](double hi) {
    const int n = 200000;
    const double a = -std::numbers::pi / 2.0 + 1e-9;
    const double b = hi;
    const double h = (b - a) / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double th = a + i * h;
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      const double c = std::cos(th);
      acc += w * joint(std::tan(th)) / (c * c);
    }
    return acc * h / 3.0;
  };
  return integrate(std::atan(y2)) / integrate(std::numbers::pi / 2.0 - 1e-9);
}

TEST(MultivariateT, MatchesNumericalConditioning) {
  Eigen::Matrix2d s;
  s << 2.0, 0.6, 0.6, 1.0;
  const Eigen::Vector2d mu(0.2, -0.1);
  for (auto [y1, y2] : {std::pair{1.3, -0.4}, std::pair{-2.0, 1.5}, std::pair{0.0, 0.3}}) {
    const auto f = multivariate_t_factors(Eigen::Vector2d(y1, y2), mu, s, 5.0);
    EXPECT_NEAR(pit_step(y2, f[1]), numeric_conditional_t_cdf(y1, y2, mu, s, 5.0), 1e-7);
  }
}

TEST(MultivariateT, LargeDofApproachesNormal) {
  Eigen::Matrix3d s;
  s << 1.0, 0.3, 0.2, 0.3, 2.0, -0.4, 0.2, -0.4, 1.5;
  const Eigen::Vector3d y(0.5, -1.0, 2.0);
  const auto t = multivariate_t_factors(y, Eigen::Vector3d::Zero(), s, 1e9);
  const auto n = multivariate_normal_factors(y, Eigen::Vector3d::Zero(), s);
  for (std::size_t l = 0; l < 3; ++l) {
    EXPECT_NEAR(pit_step(y(l), t[l]), pit_step(y(l), n[l]), 1e-7);
  }
}

TEST(Rosenblatt, MediansAndEmpty) {
  StackedSeries z{{1.0, -2.0, 3.0, 0.0}, {0, 1}, 2};
  std::vector<ConditionalFactor> f{
      ConditionalFactor::normal(1.0, 1.0), ConditionalFactor::student_t(-2.0, 3.0, 4.0),
      ConditionalFactor::normal(3.0, 0.1), ConditionalFactor::normal(0.0, 5.0)};
  const PitSequence u = rosenblatt(f, z);
  for (std::size_t k = 0; k < u.size(); ++k) EXPECT_EQ(u[k], 0.5);
  EXPECT_TRUE(rosenblatt({}, StackedSeries{{}, {0, 1}, 2}).empty());
  f.pop_back();
  EXPECT_THROW(rosenblatt(f, z), DimensionError);
}

TEST(NormalScores, InvertTheCdf) {
  const std::vector<double> u{kPitFloor, 0.1, 0.5, 0.975, 1.0 - kPitFloor};
  const auto x = normal_scores(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_TRUE(std::isfinite(x[i]));
    EXPECT_NEAR(normal_cdf(x[i]), u[i], 1e-13);
  }
}

}  // namespace
}  // namespace mvspec
