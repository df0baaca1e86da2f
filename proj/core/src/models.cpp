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

#include "mvspec/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "mvspec/nelder_mead.hpp"

namespace mvspec {
namespace {

constexpr std::size_t kLstarParams = 11;
constexpr std::size_t kMinExtraRows = 10;

Eigen::MatrixXd permute_matrix(const Eigen::MatrixXd& m, const Permutation& order) {
  const auto d = static_cast<Eigen::Index>(order.size());
  Eigen::MatrixXd out(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      out(i, j) = m(static_cast<Eigen::Index>(order[static_cast<std::size_t>(i)]),
                    static_cast<Eigen::Index>(order[static_cast<std::size_t>(j)]));
    }
  }
  return out;
}

Eigen::VectorXd permute_vector(const Eigen::VectorXd& v, const Permutation& order) {
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(order[i]));
  }
  return out;
}

// Conditional mean of row t given the rows before it. Requires t >= lags().
Eigen::VectorXd conditional_mean(const ModelFamily& family, const ModelParams& theta,
                                 const Eigen::MatrixXd& y, Eigen::Index t) {
  switch (family.kind) {
    case ModelKind::iid_normal_diag:
    case ModelKind::iid_normal_full:
    case ModelKind::iid_t:
      return theta.mu;
    case ModelKind::var1_normal:
      return theta.mu + theta.ar * y.row(t - 1).transpose();
    case ModelKind::lstar2_normal:
    case ModelKind::lstar2_t:
      return lstar_mean(theta.b, y.row(t - 1).transpose(), y.row(t - 2).transpose(),
                        y.row(t - 3).transpose());
  }
  return theta.mu;
}

// Draws one innovation vector L z sqrt(nu / W) (or L z when dof <= 0).
Eigen::VectorXd draw_innovation(const Eigen::MatrixXd& chol, double dof, RngStream& rng) {
  Eigen::VectorXd z(chol.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  Eigen::VectorXd e = chol * z;
  if (dof > 0.0) e *= std::sqrt(dof / rng.chi_squared(dof));
  return e;
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& resid) {
  return resid.transpose() * resid / static_cast<double>(resid.rows());
}

double log_det_spd(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd l = llt.matrixL();
  double s = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) > 0.0)) return std::numeric_limits<double>::infinity();
    s += std::log(l(i, i));
  }
  return 2.0 * s;
}

void require_rows(const ModelFamily& family, const SeriesMatrix& data) {
  if (data.cols() != family.d) {
    throw DimensionError("data has " + std::to_string(data.cols()) + " columns, model " +
                         family.name() + " expects " + std::to_string(family.d));
  }
  if (data.rows() < family.lags() + kMinExtraRows) {
    throw EstimationError("model " + family.name() + " needs at least " +
                          std::to_string(family.lags() + kMinExtraRows) + " rows");
  }
}

Eigen::MatrixXd checked_covariance(const Eigen::MatrixXd& sigma) {
  try {
    (void)cholesky_lower(sigma);
  } catch (const NotSpdError&) {
    throw EstimationError("estimated covariance is singular");
  }
  return sigma;
}

// ---------------------------------------------------------------------------
// LSTAR estimation by profile likelihood over (b6, b7).

struct LstarDesign {
  Eigen::VectorXd y1, y2;        // responses
  Eigen::VectorXd x_lag2_first;  // Y_{t-2,1}, the transition variable
  Eigen::VectorXd y_lag1_second; // Y_{t-1,2}, the regressor switched by w_t
  Eigen::MatrixXd x1;            // [1, Y_{t-2,1}, Y_{t-3,2}, Y_{t-1,2}, -w_t Y_{t-1,2}]
  Eigen::MatrixXd x2;            // [1, Y_{t-3,1}, Y_{t-1,2}, Y_{t-2,2}]
};

LstarDesign lstar_design(const Eigen::MatrixXd& y) {
  const Eigen::Index n = y.rows() - 3;
  LstarDesign des;
  des.y1.resize(n);
  des.y2.resize(n);
  des.x_lag2_first.resize(n);
  des.y_lag1_second.resize(n);
  des.x1.resize(n, 5);
  des.x2.resize(n, 4);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index t = i + 3;
    des.y1(i) = y(t, 0);
    des.y2(i) = y(t, 1);
    des.x_lag2_first(i) = y(t - 2, 0);
    des.y_lag1_second(i) = y(t - 1, 1);
    des.x1.row(i) << 1.0, y(t - 2, 0), y(t - 3, 1), y(t - 1, 1), 0.0;
    des.x2.row(i) << 1.0, y(t - 3, 0), y(t - 1, 1), y(t - 2, 1);
  }
  return des;
}

struct SurFit {
  Eigen::VectorXd beta1, beta2;
  Eigen::MatrixXd sigma;
  double log_det = std::numeric_limits<double>::infinity();
};

Eigen::VectorXd ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, bool& ok) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(x.transpose() * x);
  ok = ldlt.info() == Eigen::Success && ldlt.isPositive() &&
       ldlt.vectorD().minCoeff() > 1e-12 * std::max(1.0, ldlt.vectorD().maxCoeff());
  return ldlt.solve(x.transpose() * y);
}

// Two-equation SUR by iterated feasible GLS; the fixed point is the Gaussian
// ML estimate of the linear coefficients and Sigma.
SurFit fit_sur(const Eigen::MatrixXd& x1, const Eigen::VectorXd& y1,
               const Eigen::MatrixXd& x2, const Eigen::VectorXd& y2) {
  SurFit fit;
  bool ok1 = false;
  bool ok2 = false;
  fit.beta1 = ols(x1, y1, ok1);
  fit.beta2 = ols(x2, y2, ok2);
  if (!ok1 || !ok2) return fit;
  const Eigen::Index k1 = x1.cols();
  const Eigen::Index k2 = x2.cols();
  const Eigen::MatrixXd x11 = x1.transpose() * x1;
  const Eigen::MatrixXd x12 = x1.transpose() * x2;
  const Eigen::MatrixXd x22 = x2.transpose() * x2;
  const Eigen::VectorXd x1y1 = x1.transpose() * y1, x1y2 = x1.transpose() * y2;
  const Eigen::VectorXd x2y1 = x2.transpose() * y1, x2y2 = x2.transpose() * y2;
  const double n = static_cast<double>(y1.size());
  Eigen::MatrixXd resid(y1.size(), 2);
  for (int iter = 0; iter < 100; ++iter) {
    resid.col(0) = y1 - x1 * fit.beta1;
    resid.col(1) = y2 - x2 * fit.beta2;
    fit.sigma = resid.transpose() * resid / n;
    const double ld = log_det_spd(fit.sigma);
    if (!std::isfinite(ld)) {
      fit.log_det = ld;
      return fit;
    }
    const bool done = std::abs(fit.log_det - ld) < 1e-13 * std::max(1.0, std::abs(ld));
    fit.log_det = ld;
    if (done) break;
    const Eigen::Matrix2d p = fit.sigma.inverse();
    Eigen::MatrixXd lhs(k1 + k2, k1 + k2);
    lhs.topLeftCorner(k1, k1) = p(0, 0) * x11;
    lhs.topRightCorner(k1, k2) = p(0, 1) * x12;
    lhs.bottomLeftCorner(k2, k1) = p(0, 1) * x12.transpose();
    lhs.bottomRightCorner(k2, k2) = p(1, 1) * x22;
    Eigen::VectorXd rhs(k1 + k2);
    rhs.head(k1) = p(0, 0) * x1y1 + p(0, 1) * x1y2;
    rhs.tail(k2) = p(0, 1) * x2y1 + p(1, 1) * x2y2;
    const Eigen::VectorXd beta = lhs.ldlt().solve(rhs);
    fit.beta1 = beta.head(k1);
    fit.beta2 = beta.tail(k2);
  }
  return fit;
}

SurFit lstar_profile(LstarDesign& des, double b6, double b7) {
  for (Eigen::Index i = 0; i < des.x1.rows(); ++i) {
    const double w = 1.0 / (1.0 + std::exp(-b6 * (des.x_lag2_first(i) - b7)));
    des.x1(i, 4) = -w * des.y_lag1_second(i);
  }
  return fit_sur(des.x1, des.y1, des.x2, des.y2);
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

constexpr double kMaxLogSlope = 12.0;

FittedModel estimate_lstar_normal(const ModelFamily& family, const SeriesMatrix& data) {
  LstarDesign des = lstar_design(data.values());
  std::vector<double> sorted(des.x_lag2_first.begin(), des.x_lag2_first.end());
  std::sort(sorted.begin(), sorted.end());
  const double mean = des.x_lag2_first.mean();
  const double sd = std::sqrt((des.x_lag2_first.array() - mean).square().mean());
  if (!(sd > 0.0)) throw EstimationError("LSTAR: transition variable is constant");

  double best_ld = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  double best_b7 = 0.0;
  for (double slope : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    for (int dec = 1; dec <= 9; ++dec) {
      const double b6 = slope / sd;
      const double b7 = quantile_sorted(sorted, dec / 10.0);
      const double ld = lstar_profile(des, b6, b7).log_det;
      if (ld < best_ld) {
        best_ld = ld;
        best_s = std::log(b6);
        best_b7 = b7;
      }
    }
  }
  if (!std::isfinite(best_ld)) throw EstimationError("LSTAR: singular design on every grid point");

  auto objective = [&](const Eigen::VectorXd& x) {
    if (std::abs(x(0)) > kMaxLogSlope) return std::numeric_limits<double>::infinity();
    return lstar_profile(des, std::exp(x(0)), x(1)).log_det;
  };
  NelderMeadOptions opt;
  opt.initial_step = Eigen::Vector2d(0.5, 0.25 * sd);
  const NelderMeadResult nm = nelder_mead(objective, Eigen::Vector2d(best_s, best_b7), opt);
  const double b6 = std::exp(nm.x(0));
  const double b7 = nm.x(1);
  const SurFit fit = lstar_profile(des, b6, b7);
  if (!std::isfinite(fit.log_det)) throw EstimationError("LSTAR: singular covariance");

  FittedModel out;
  out.family = family;
  out.theta.b.resize(kLstarParams);
  out.theta.b << fit.beta1(0), fit.beta1(1), fit.beta1(2), fit.beta1(3), fit.beta1(4), b6,
      b7, fit.beta2(0), fit.beta2(1), fit.beta2(2), fit.beta2(3);
  out.theta.sigma = checked_covariance(fit.sigma);
  out.converged = nm.converged;
  out.iterations = nm.iterations;
  out.loglik = log_likelihood(family, out.theta, data);
  return out;
}

FittedModel estimate_lstar_t(const ModelFamily& family, const SeriesMatrix& data) {
  ModelFamily normal_family = family;
  normal_family.kind = ModelKind::lstar2_normal;
  normal_family.fixed_dof = 0.0;
  const FittedModel start = estimate_lstar_normal(normal_family, data);
  const double nu = family.fixed_dof;
  const double shrink = nu > 2.0 ? (nu - 2.0) / nu : 1.0;

  Eigen::VectorXd x0(kLstarParams + 3);
  x0.head(kLstarParams) = start.theta.b;
  x0(5) = std::log(x0(5));
  x0.tail(3) = pack_spd(start.theta.sigma * shrink);
  ModelParams theta;
  theta.dof = nu;
  auto unpack = [&](const Eigen::VectorXd& x) {
    theta.b = x.head(kLstarParams);
    theta.b(5) = std::exp(x(5));
    theta.sigma = unpack_spd(x.tail(3), 2);
  };
  auto objective = [&](const Eigen::VectorXd& x) {
    if (std::abs(x(5)) > kMaxLogSlope) return std::numeric_limits<double>::infinity();
    unpack(x);
    try {
      return -log_likelihood(family, theta, data);
    } catch (const NotSpdError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  NelderMeadOptions opt;
  opt.initial_step = x0.cwiseAbs().cwiseMax(0.5) * 0.05;
  const NelderMeadResult nm = nelder_mead(objective, x0, opt);
  unpack(nm.x);
  FittedModel out;
  out.family = family;
  out.theta = theta;
  out.theta.sigma = checked_covariance(theta.sigma);
  out.loglik = -nm.value;
  out.converged = nm.converged;
  out.iterations = nm.iterations;
  return out;
}

// Multivariate t with known dof: EM iterations for location and scale.
FittedModel estimate_iid_t(const ModelFamily& family, const SeriesMatrix& data) {
  const Eigen::MatrixXd& y = data.values();
  const auto n = y.rows();
  const double nu = family.fixed_dof;
  const double d = static_cast<double>(family.d);
  ModelParams theta;
  theta.dof = nu;
  theta.mu = y.colwise().mean().transpose();
  const Eigen::MatrixXd centered = y.rowwise() - theta.mu.transpose();
  theta.sigma = checked_covariance(sample_covariance(centered)) * (nu > 2.0 ? (nu - 2.0) / nu : 1.0);

  FittedModel out;
  out.family = family;
  out.converged = false;
  double prev = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd w(n);
  for (std::size_t it = 1; it <= 2000; ++it) {
    const Eigen::LLT<Eigen::MatrixXd> llt(theta.sigma);
    for (Eigen::Index t = 0; t < n; ++t) {
      const Eigen::VectorXd r = y.row(t).transpose() - theta.mu;
      const double q = r.dot(llt.solve(r));
      w(t) = (nu + d) / (nu + q);
    }
    theta.mu = (y.transpose() * w) / w.sum();
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(y.cols(), y.cols());
    for (Eigen::Index t = 0; t < n; ++t) {
      const Eigen::VectorXd r = y.row(t).transpose() - theta.mu;
      s += w(t) * r * r.transpose();
    }
    theta.sigma = checked_covariance(s / static_cast<double>(n));
    const double ll = log_likelihood(family, theta, data);
    out.iterations = it;
    if (std::abs(ll - prev) <= 1e-9 * std::abs(ll)) {
      out.converged = true;
      prev = ll;
      break;
    }
    prev = ll;
  }
  out.theta = theta;
  out.loglik = prev;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

ModelFamily ModelFamily::parse(std::string_view name, std::size_t d, double dof) {
  ModelFamily f;
  f.d = d;
  if (name == "iid_normal_diag" || name == "h0a") {
    f.kind = ModelKind::iid_normal_diag;
  } else if (name == "iid_normal_full" || name == "h0b") {
    f.kind = ModelKind::iid_normal_full;
  } else if (name == "iid_t") {
    f.kind = ModelKind::iid_t;
  } else if (name == "var1_normal") {
    f.kind = ModelKind::var1_normal;
  } else if (name == "lstar2_normal" || name == "h0nar") {
    f.kind = ModelKind::lstar2_normal;
  } else if (name == "lstar2_t") {
    f.kind = ModelKind::lstar2_t;
  } else {
    throw std::invalid_argument("unknown model family '" + std::string(name) + "'");
  }
  if (f.student_t()) f.fixed_dof = dof;
  f.validate();
  return f;
}

std::string ModelFamily::name() const {
  switch (kind) {
    case ModelKind::iid_normal_diag: return "iid_normal_diag";
    case ModelKind::iid_normal_full: return "iid_normal_full";
    case ModelKind::iid_t: return "iid_t";
    case ModelKind::var1_normal: return "var1_normal";
    case ModelKind::lstar2_normal: return "lstar2_normal";
    case ModelKind::lstar2_t: return "lstar2_t";
  }
  return "unknown";
}

std::size_t ModelFamily::lags() const {
  switch (kind) {
    case ModelKind::var1_normal: return 1;
    case ModelKind::lstar2_normal:
    case ModelKind::lstar2_t: return 3;
    default: return 0;
  }
}

void ModelFamily::validate() const {
  if (d < 1) throw std::invalid_argument("model dimension must be at least 1");
  if ((kind == ModelKind::lstar2_normal || kind == ModelKind::lstar2_t) && d != 2) {
    throw std::invalid_argument("LSTAR models are bivariate (d = 2)");
  }
  if (student_t() && !(fixed_dof > 0.0)) {
    throw std::invalid_argument("t families need a positive dof");
  }
}

void validate_params(const ModelFamily& family, const ModelParams& theta) {
  family.validate();
  const auto d = static_cast<Eigen::Index>(family.d);
  if (theta.sigma.rows() != d || theta.sigma.cols() != d) {
    throw DimensionError("sigma must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  (void)cholesky_lower(theta.sigma);
  if (family.kind == ModelKind::iid_normal_diag) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        if (i != j && theta.sigma(i, j) != 0.0) {
          throw std::invalid_argument("iid_normal_diag requires a diagonal sigma");
        }
      }
    }
  }
  switch (family.kind) {
    case ModelKind::var1_normal:
      if (theta.ar.rows() != d || theta.ar.cols() != d) throw DimensionError("AR matrix shape");
      [[fallthrough]];
    case ModelKind::iid_normal_diag:
    case ModelKind::iid_normal_full:
    case ModelKind::iid_t:
      if (theta.mu.size() != d) throw DimensionError("mean vector length");
      break;
    case ModelKind::lstar2_normal:
    case ModelKind::lstar2_t:
      if (theta.b.size() != static_cast<Eigen::Index>(kLstarParams)) {
        throw DimensionError("LSTAR needs b1..b11");
      }
      if (!(theta.b(5) > 0.0)) throw std::invalid_argument("LSTAR slope b6 must be positive");
      if (!theta.b.allFinite()) throw std::invalid_argument("LSTAR parameters must be finite");
      break;
  }
  if (family.student_t() && !(theta.dof > 0.0)) {
    throw std::invalid_argument("t family parameters need dof > 0");
  }
}

std::vector<std::pair<std::string, double>> named_parameters(const ModelFamily& family,
                                                             const ModelParams& theta) {
  std::vector<std::pair<std::string, double>> out;
  const auto d = static_cast<Eigen::Index>(family.d);
  auto idx = [](Eigen::Index i) { return std::to_string(i + 1); };
  if (family.kind == ModelKind::lstar2_normal || family.kind == ModelKind::lstar2_t) {
    for (Eigen::Index i = 0; i < theta.b.size(); ++i) out.emplace_back("b" + idx(i), theta.b(i));
  } else {
    for (Eigen::Index i = 0; i < d; ++i) out.emplace_back("mu" + idx(i), theta.mu(i));
  }
  if (family.kind == ModelKind::var1_normal) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) out.emplace_back("a" + idx(i) + idx(j), theta.ar(i, j));
    }
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      out.emplace_back("sigma" + idx(i) + idx(j), theta.sigma(i, j));
    }
  }
  if (family.student_t()) out.emplace_back("dof", theta.dof);
  return out;
}

ModelParams params_from_named(const ModelFamily& family,
                              const std::map<std::string, double>& values) {
  auto get = [&](const std::string& key, double fallback, bool required) {
    auto it = values.find(key);
    if (it == values.end()) {
      if (required) throw std::invalid_argument("missing parameter '" + key + "'");
      return fallback;
    }
    return it->second;
  };
  const auto d = static_cast<Eigen::Index>(family.d);
  auto idx = [](Eigen::Index i) { return std::to_string(i + 1); };
  ModelParams theta;
  const bool lstar =
      family.kind == ModelKind::lstar2_normal || family.kind == ModelKind::lstar2_t;
  if (lstar) {
    theta.b.resize(kLstarParams);
    for (Eigen::Index i = 0; i < theta.b.size(); ++i) theta.b(i) = get("b" + idx(i), 0.0, true);
  } else {
    theta.mu.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) theta.mu(i) = get("mu" + idx(i), 0.0, false);
  }
  if (family.kind == ModelKind::var1_normal) {
    theta.ar.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) theta.ar(i, j) = get("a" + idx(i) + idx(j), 0.0, false);
    }
  }
  theta.sigma.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      const double v = get("sigma" + idx(i) + idx(j), i == j ? 1.0 : 0.0, false);
      theta.sigma(i, j) = v;
      theta.sigma(j, i) = v;
    }
  }
  if (family.student_t()) theta.dof = get("dof", family.fixed_dof, false);
  validate_params(family, theta);
  return theta;
}

double lstar_weight(const Eigen::VectorXd& b, double y_lag2_first) {
  return 1.0 / (1.0 + std::exp(-b(5) * (y_lag2_first - b(6))));
}

Eigen::Vector2d lstar_mean(const Eigen::VectorXd& b, const Eigen::Vector2d& lag1,
                           const Eigen::Vector2d& lag2, const Eigen::Vector2d& lag3) {
  const double w = lstar_weight(b, lag2(0));
  return {b(0) + b(1) * lag2(0) + b(2) * lag3(1) + b(3) * lag1(1) + w * (-b(4) * lag1(1)),
          b(7) + b(8) * lag3(0) + b(9) * lag1(1) + b(10) * lag2(1)};
}

SeriesMatrix simulate_lstar(const Eigen::VectorXd& b, const Eigen::MatrixXd& sigma,
                            double dof, double extra_alpha, std::size_t T,
                            const InitPolicy& init, RngStream& rng) {
  if (T < 1) throw std::invalid_argument("simulate: T must be at least 1");
  const Eigen::MatrixXd chol = cholesky_lower(sigma);
  const Eigen::Vector2d start = init.initial.size() == 2 ? Eigen::Vector2d(init.initial)
                                                         : Eigen::Vector2d::Zero();
  const std::size_t total = T + init.burn_in;
  Eigen::MatrixXd y(static_cast<Eigen::Index>(total + 3), 2);
  for (int i = 0; i < 3; ++i) y.row(i) = start.transpose();
  for (Eigen::Index t = 3; t < y.rows(); ++t) {
    Eigen::Vector2d mu = lstar_mean(b, y.row(t - 1).transpose(), y.row(t - 2).transpose(),
                                    y.row(t - 3).transpose());
    mu(0) += extra_alpha * y(t - 2, 1);
    y.row(t) = (mu + draw_innovation(chol, dof, rng)).transpose();
  }
  return SeriesMatrix(y.bottomRows(static_cast<Eigen::Index>(T)));
}

SeriesMatrix simulate(const ModelFamily& family, const ModelParams& theta, std::size_t T,
                      const InitPolicy& init, RngStream& rng) {
  validate_params(family, theta);
  if (T < 1) throw std::invalid_argument("simulate: T must be at least 1");
  const double dof = family.student_t() ? theta.dof : 0.0;
  const auto d = static_cast<Eigen::Index>(family.d);
  if (family.kind == ModelKind::lstar2_normal || family.kind == ModelKind::lstar2_t) {
    return simulate_lstar(theta.b, theta.sigma, dof, 0.0, T, init, rng);
  }
  const Eigen::MatrixXd chol = cholesky_lower(theta.sigma);
  if (family.kind == ModelKind::var1_normal) {
    Eigen::VectorXd prev = init.initial.size() == d ? init.initial : Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd y(static_cast<Eigen::Index>(T), d);
    for (std::size_t t = 0; t < T + init.burn_in; ++t) {
      prev = theta.mu + theta.ar * prev + draw_innovation(chol, 0.0, rng);
      if (t >= init.burn_in) y.row(static_cast<Eigen::Index>(t - init.burn_in)) = prev.transpose();
    }
    return SeriesMatrix(std::move(y));
  }
  Eigen::MatrixXd y(static_cast<Eigen::Index>(T), d);
  for (Eigen::Index t = 0; t < y.rows(); ++t) {
    y.row(t) = (theta.mu + draw_innovation(chol, dof, rng)).transpose();
  }
  return SeriesMatrix(std::move(y));
}

FittedModel estimate(const ModelFamily& family, const SeriesMatrix& data) {
  family.validate();
  require_rows(family, data);
  const Eigen::MatrixXd& y = data.values();
  switch (family.kind) {
    case ModelKind::iid_normal_diag:
    case ModelKind::iid_normal_full: {
      FittedModel out;
      out.family = family;
      out.theta.mu = y.colwise().mean().transpose();
      Eigen::MatrixXd s = sample_covariance(y.rowwise() - out.theta.mu.transpose());
      if (family.kind == ModelKind::iid_normal_diag) s = Eigen::MatrixXd(s.diagonal().asDiagonal());
      out.theta.sigma = checked_covariance(s);
      out.loglik = log_likelihood(family, out.theta, data);
      return out;
    }
    case ModelKind::iid_t:
      return estimate_iid_t(family, data);
    case ModelKind::var1_normal: {
      const Eigen::Index n = y.rows() - 1;
      const auto d = y.cols();
      Eigen::MatrixXd x(n, d + 1);
      x.col(0).setOnes();
      x.rightCols(d) = y.topRows(n);
      const Eigen::MatrixXd resp = y.bottomRows(n);
      Eigen::LDLT<Eigen::MatrixXd> ldlt(x.transpose() * x);
      if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
          ldlt.vectorD().minCoeff() <= 1e-12 * ldlt.vectorD().maxCoeff()) {
        throw EstimationError("VAR(1): singular design matrix");
      }
      const Eigen::MatrixXd coef = ldlt.solve(x.transpose() * resp);  // (d+1) x d
      FittedModel out;
      out.family = family;
      out.theta.mu = coef.row(0).transpose();
      out.theta.ar = coef.bottomRows(d).transpose();
      out.theta.sigma = checked_covariance(sample_covariance(resp - x * coef));
      out.loglik = log_likelihood(family, out.theta, data);
      return out;
    }
    case ModelKind::lstar2_normal:
      return estimate_lstar_normal(family, data);
    case ModelKind::lstar2_t:
      return estimate_lstar_t(family, data);
  }
  throw std::logic_error("unreachable");
}

std::vector<ConditionalFactor> conditional_factors(const ModelFamily& family,
                                                   const ModelParams& theta,
                                                   const SeriesMatrix& data,
                                                   const Permutation& order) {
  validate_params(family, theta);
  if (data.cols() != family.d) throw DimensionError("data/model dimension mismatch");
  validate_order(order, family.d);
  const std::size_t p = family.lags();
  if (data.rows() <= p) throw DimensionError("not enough rows for the model lags");
  const Eigen::MatrixXd chol = cholesky_lower(permute_matrix(theta.sigma, order));
  const double dof = family.student_t() ? theta.dof : 0.0;
  const Eigen::MatrixXd& y = data.values();
  std::vector<ConditionalFactor> out;
  out.reserve((data.rows() - p) * family.d);
  for (auto t = static_cast<Eigen::Index>(p); t < y.rows(); ++t) {
    const Eigen::VectorXd mu = conditional_mean(family, theta, y, t);
    append_elliptical_factors(permute_vector(y.row(t).transpose(), order),
                              permute_vector(mu, order), chol, dof, out);
  }
  return out;
}

StackedSeries stack_effective(const ModelFamily& family, const SeriesMatrix& data,
                              const Permutation& order) {
  return stack(family.lags() == 0 ? data : data.tail_from(family.lags()), order);
}

double log_likelihood(const ModelFamily& family, const ModelParams& theta,
                      const SeriesMatrix& data) {
  const Permutation order = identity_order(family.d);
  const auto factors = conditional_factors(family, theta, data, order);
  const StackedSeries z = stack_effective(family, data, order);
  double ll = 0.0;
  for (std::size_t k = 0; k < factors.size(); ++k) ll += factors[k].log_density(z.z[k]);
  return ll;
}

Eigen::VectorXd pack_spd(const Eigen::MatrixXd& sigma) {
  const Eigen::MatrixXd l = cholesky_lower(sigma);
  const Eigen::Index d = l.rows();
  Eigen::VectorXd out(d * (d + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) out(k++) = i == j ? std::log(l(i, i)) : l(i, j);
  }
  return out;
}

Eigen::MatrixXd unpack_spd(const Eigen::VectorXd& packed, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  if (packed.size() != n * (n + 1) / 2) throw DimensionError("packed SPD length");
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) l(i, j) = i == j ? std::exp(packed(k++)) : packed(k++);
  }
  const Eigen::MatrixXd m = l * l.transpose();
  return 0.5 * (m + m.transpose());
}

}  // namespace mvspec
