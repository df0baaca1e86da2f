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

#include "mvspec/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace mvspec {
namespace {

struct RunResult {
  Eigen::VectorXd x;
  double value;
  bool converged;
  std::size_t iterations;
};

class Simplex {
 public:
  Simplex(const std::function<double(const Eigen::VectorXd&)>& f, std::size_t& evals)
      : f_(f), evals_(evals) {}

  double eval(const Eigen::VectorXd& x) {
    ++evals_;
    const double v = f_(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  }

  RunResult run(const Eigen::VectorXd& x0, double f0, const Eigen::VectorXd& step,
                const NelderMeadOptions& opt) {
    const Eigen::Index n = x0.size();
    const double dn = static_cast<double>(n);
    // Gao & Han adaptive coefficients; reduce to the classic ones for n = 2.
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / dn;
    const double gamma = 0.75 - 1.0 / (2.0 * dn);
    const double delta = 1.0 - 1.0 / dn;

    std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n + 1), x0);
    std::vector<double> vals(pts.size(), f0);
    for (Eigen::Index i = 0; i < n; ++i) {
      pts[static_cast<std::size_t>(i + 1)](i) += step(i);
      vals[static_cast<std::size_t>(i + 1)] = eval(pts[static_cast<std::size_t>(i + 1)]);
    }
    std::vector<std::size_t> idx(pts.size());
    std::size_t it = 0;
    bool converged = false;
    for (; it < opt.max_iterations; ++it) {
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
      const std::size_t best = idx.front();
      const std::size_t worst = idx.back();
      const std::size_t second = idx[idx.size() - 2];
      if (std::isfinite(vals[worst]) &&
          vals[worst] - vals[best] <=
              opt.rel_tolerance * std::abs(vals[best]) + opt.abs_tolerance) {
        converged = true;
        break;
      }
      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (std::size_t i = 0; i + 1 < idx.size(); ++i) centroid += pts[idx[i]];
      centroid /= dn;

      const Eigen::VectorXd xr = centroid + alpha * (centroid - pts[worst]);
      const double fr = eval(xr);
      if (fr < vals[best]) {
        const Eigen::VectorXd xe = centroid + beta * (xr - centroid);
        const double fe = eval(xe);
        if (fe < fr) {
          pts[worst] = xe;
          vals[worst] = fe;
        } else {
          pts[worst] = xr;
          vals[worst] = fr;
        }
        continue;
      }
      if (fr < vals[second]) {
        pts[worst] = xr;
        vals[worst] = fr;
        continue;
      }
      const bool outside = fr < vals[worst];
      const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + gamma * (xr - centroid))
                                         : Eigen::VectorXd(centroid - gamma * (centroid - pts[worst]));
      const double fc = eval(xc);
      if (fc < (outside ? fr : vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
        continue;
      }
      for (std::size_t i = 1; i < idx.size(); ++i) {
        const std::size_t j = idx[i];
        pts[j] = pts[best] + delta * (pts[j] - pts[best]);
        vals[j] = eval(pts[j]);
      }
    }
    const auto best = static_cast<std::size_t>(
        std::min_element(vals.begin(), vals.end()) - vals.begin());
    return {pts[best], vals[best], converged, it};
  }

 private:
  const std::function<double(const Eigen::VectorXd&)>& f_;
  std::size_t& evals_;
};

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& x0, const NelderMeadOptions& options) {
  NelderMeadResult result;
  Simplex simplex(objective, result.evaluations);
  Eigen::VectorXd step = options.initial_step;
  if (step.size() != x0.size()) {
    step = x0.cwiseAbs().cwiseMax(1.0) * 0.1;
  }
  result.x = x0;
  result.value = simplex.eval(x0);
  if (x0.size() == 0) {
    result.converged = true;
    return result;
  }
  for (std::size_t attempt = 0; attempt <= options.max_restarts; ++attempt) {
    const double before = result.value;
    RunResult run = simplex.run(result.x, result.value, step, options);
    result.iterations += run.iterations;
    if (run.value <= result.value) {
      result.x = run.x;
      result.value = run.value;
    }
    result.converged = run.converged;
    if (!run.converged) break;
    if (attempt > 0 && std::isfinite(before) &&
        before - result.value <= options.rel_tolerance * std::abs(result.value) +
                                     options.abs_tolerance) {
      break;
    }
  }
  return result;
}

}  // namespace mvspec
