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

#include "mvspec/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <cctype>
#include <cmath>

#include "mvspec/parallel.hpp"

namespace mvspec {
namespace {

constexpr std::array<std::string_view, 15> kNames = {"A1", "A2", "A3", "B1", "B2", "B3", "B4", "B5",
                                                     "B6", "C1", "C2", "C3", "C4", "C5", "C6"};

bool a_family(DgpId id) { return id == DgpId::A1 || id == DgpId::A2 || id == DgpId::A3; }

Eigen::Matrix2d matrix2(double s11, double s12, double s22) {
  Eigen::Matrix2d m;
  m << s11, s12, s12, s22;
  return m;
}

}  // namespace

DgpSpec DgpSpec::make(DgpId id, double alpha, std::size_t T) {
  DgpSpec spec{id, alpha, T};
  if (id == DgpId::C5) spec.alpha = 0.5;
  if (id == DgpId::C6) spec.alpha = 0.9;
  spec.validate();
  return spec;
}

DgpSpec DgpSpec::parse(std::string_view name, double alpha, std::size_t T) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper.rfind("DGP-", 0) == 0) upper = upper.substr(4);
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (upper == kNames[i]) return make(static_cast<DgpId>(i), alpha, T);
  }
  throw std::invalid_argument("unknown DGP '" + std::string(name) + "'");
}

std::string DgpSpec::name() const { return std::string(kNames[static_cast<std::size_t>(id)]); }

void DgpSpec::validate() const {
  if (T < 1) throw std::invalid_argument("DGP needs T >= 1");
  if (a_family(id) && !(alpha >= 0.0 && alpha <= 0.9 + 1e-12)) {
    throw std::invalid_argument("A-family alpha must lie in [0, 0.9]");
  }
}

ModelParams lstar_reference_params() {
  ModelParams theta;
  theta.b.resize(11);
  theta.b << 0.35, 0.21, 0.15, 0.32, -0.52, 2.56, 0.68, 0.20, -0.14, 1.14, -0.26;
  theta.sigma = matrix2(0.95, -0.02, 0.45);
  return theta;
}

ModelFamily default_null(DgpId id) {
  if (a_family(id)) return ModelFamily::parse("iid_normal_diag", 2);
  if (id >= DgpId::C1) return ModelFamily::parse("lstar2_normal", 2);
  return ModelFamily::parse("iid_normal_full", 2);
}

SeriesMatrix dgp_simulate(const DgpSpec& spec, RngStream& rng) {
  spec.validate();
  InitPolicy init;
  ModelParams theta;
  theta.mu = Eigen::Vector2d::Zero();
  switch (spec.id) {
    case DgpId::A1:
    case DgpId::A2: {
      theta.sigma = matrix2(2.0, spec.alpha, 1.0);
      const bool t = spec.id == DgpId::A2;
      theta.dof = t ? 5.0 : 0.0;
      return simulate(ModelFamily::parse(t ? "iid_t" : "iid_normal_full", 2, 5.0), theta, spec.T,
                      init, rng);
    }
    case DgpId::A3:
      theta.sigma = Eigen::Matrix2d::Identity();
      theta.ar = matrix2(spec.alpha, 0.0, 0.0);
      return simulate(ModelFamily::parse("var1_normal", 2), theta, spec.T, init, rng);
    case DgpId::B1:
    case DgpId::B2:
    case DgpId::B3:
    case DgpId::B4:
    case DgpId::B5:
    case DgpId::B6: {
      static const std::array<Eigen::Matrix2d, 3> shapes = {
          matrix2(1.0, 0.5, 1.0), matrix2(1.0, 0.5, 2.0), matrix2(2.0, 0.5, 1.0)};
      const auto idx = static_cast<std::size_t>(spec.id) - static_cast<std::size_t>(DgpId::B1);
      theta.sigma = shapes[idx % 3];
      const bool t = idx >= 3;
      theta.dof = t ? 5.0 : 0.0;
      return simulate(ModelFamily::parse(t ? "iid_t" : "iid_normal_full", 2, 5.0), theta, spec.T,
                      init, rng);
    }
    case DgpId::C1:
    case DgpId::C2:
    case DgpId::C3:
    case DgpId::C4:
    case DgpId::C5:
    case DgpId::C6: {
      const ModelParams ref = lstar_reference_params();
      double dof = 0.0;
      if (spec.id == DgpId::C2) dof = 7.0;
      if (spec.id == DgpId::C3) dof = 5.0;
      if (spec.id == DgpId::C4) dof = 3.0;
      const double extra = (spec.id == DgpId::C5 || spec.id == DgpId::C6) ? spec.alpha : 0.0;
      return simulate_lstar(ref.b, ref.sigma, dof, extra, spec.T, init, rng);
    }
  }
  throw std::logic_error("unreachable");
}

double ExperimentResult::rate(const std::string& statistic, double level) const {
  const auto& row = rates.at(statistic);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (std::abs(levels[i] - level) < 1e-12) return row[i];
  }
  throw std::out_of_range("level not configured");
}

ExperimentResult run_experiment(const DgpSpec& spec, const ModelFamily& null_family,
                                std::size_t reps, const BootstrapConfig& cfg) {
  spec.validate();
  if (reps < 1) throw std::invalid_argument("experiment needs reps >= 1");
  const auto started = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.spec = spec;
  result.null_family = null_family.name();
  result.reps = reps;
  result.B = cfg.B;
  result.seed = cfg.seed;
  result.levels = cfg.alpha_levels;
  result.p_values.resize(reps);
  std::vector<std::size_t> failures(reps, 0);

  parallel_for(reps, cfg.workers, [&](std::size_t r) {
    const std::uint64_t rep_seed = derive_seed(cfg.seed, r);
    RngStream data_rng(derive_seed(rep_seed, kDataStream));
    const SeriesMatrix data = dgp_simulate(spec, data_rng);
    BootstrapConfig inner = cfg;
    inner.seed = rep_seed;
    inner.workers = 1;
    try {
      BootstrapResult br = run_bootstrap(null_family, data, inner);
      result.p_values[r] = std::move(br.p_values);
      failures[r] = br.n_failures;
    } catch (const std::exception& e) {
      throw ExperimentError(std::string("repetition ") + std::to_string(r) + " failed: " + e.what(),
                            r, rep_seed);
    }
  });

  for (const auto& [name, _] : result.p_values.front()) {
    std::vector<double> row(result.levels.size(), 0.0);
    for (const auto& pv : result.p_values) {
      const double p = pv.at(name);
      for (std::size_t i = 0; i < row.size(); ++i) row[i] += p <= result.levels[i];
    }
    for (double& v : row) v /= static_cast<double>(reps);
    result.rates[name] = std::move(row);
  }
  for (std::size_t f : failures) result.replicate_failures += f;
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

void write_tidy_csv(std::ostream& out, const std::vector<ExperimentResult>& results) {
  out << "dgp,alpha,T,null,statistic,level,rate,reps,B,seed\n";
  for (const auto& r : results) {
    for (const auto& [stat, row] : r.rates) {
      for (std::size_t i = 0; i < r.levels.size(); ++i) {
        out << r.spec.name() << ',' << r.spec.alpha << ',' << r.spec.T << ',' << r.null_family << ','
            << stat << ',' << r.levels[i] << ',' << row[i] << ',' << r.reps << ',' << r.B << ','
            << r.seed << '\n';
      }
    }
  }
}

void write_rate_table(std::ostream& out, const std::vector<ExperimentResult>& results,
                      const std::vector<std::string>& statistics) {
  constexpr int kWidth = 10;
  out << std::left << std::setw(12) << "DGP" << std::setw(6) << "level";
  for (const auto& s : statistics) out << std::right << std::setw(kWidth) << s;
  out << '\n';
  for (const auto& r : results) {
    std::string label = r.spec.name();
    if (r.spec.alpha != 0.0) {
      std::ostringstream a;
      a << " a=" << r.spec.alpha;
      label += a.str();
    }
    for (std::size_t i = 0; i < r.levels.size(); ++i) {
      std::ostringstream level;
      level << r.levels[i] * 100.0 << '%';
      out << std::left << std::setw(12) << (i == 0 ? label : "") << std::setw(6) << level.str();
      for (const auto& s : statistics) {
        auto it = r.rates.find(s);
        out << std::right << std::setw(kWidth);
        if (it == r.rates.end()) {
          out << "-";
        } else {
          std::ostringstream cell;
          cell << std::fixed << std::setprecision(1) << it->second[i] * 100.0;
          out << cell.str();
        }
      }
      out << '\n';
    }
  }
}

}  // namespace mvspec
