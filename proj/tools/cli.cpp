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

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mvspec/bootstrap.hpp"
#include "mvspec/empirical.hpp"
#include "mvspec/models.hpp"
#include "mvspec/montecarlo.hpp"
#include "mvspec/parallel.hpp"
#include "mvspec/reference_tests.hpp"
#include "mvspec/series.hpp"

namespace mvspec::cli {
namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json read_json_record(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::string first;
  std::getline(in, first);
  std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  // A run report is JSON lines; its first record echoes the config.
  json j = json::parse(first, nullptr, false);
  if (j.is_discarded() || !j.is_object()) j = json::parse(first + "\n" + rest, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw UsageError("'" + path + "' is not a JSON object");
  return j;
}

template <typename T>
void take(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
  const json j = read_json_record(path);
  try {
    take(j, "model", cfg.model);
    take(j, "dof", cfg.dof);
    take(j, "data", cfg.data_path);
    take(j, "order", cfg.order);
    take(j, "B", cfg.B);
    take(j, "seed", cfg.seed);
    take(j, "lags", cfg.lags);
    take(j, "levels", cfg.levels);
    take(j, "output", cfg.output_path);
    take(j, "workers", cfg.workers);
    take(j, "max_redraws", cfg.max_redraws);
    take(j, "burn_in", cfg.burn_in);
    take(j, "theta", cfg.theta_path);
    take(j, "dgp", cfg.dgp);
    if (j.contains("alpha")) {
      cfg.alphas = j["alpha"].is_array() ? j["alpha"].get<std::vector<double>>()
                                         : std::vector<double>{j["alpha"].get<double>()};
    }
    take(j, "T", cfg.T);
    take(j, "reps", cfg.reps);
    take(j, "null", cfg.null_model);
    take(j, "table", cfg.table_path);
  } catch (const json::exception& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
}

void apply_environment(RunConfig& cfg) {
  if (const char* s = std::getenv("MVSPEC_SEED"); s && *s) {
    try {
      cfg.seed = std::stoull(s);
    } catch (const std::exception&) {
      throw UsageError("MVSPEC_SEED is not an unsigned integer");
    }
  }
  if (const char* w = std::getenv("MVSPEC_WORKERS"); w && *w) {
    try {
      cfg.workers = static_cast<unsigned>(std::stoul(w));
    } catch (const std::exception&) {
      throw UsageError("MVSPEC_WORKERS is not an unsigned integer");
    }
  }
}

json config_record(const RunConfig& cfg) {
  json j;
  j["record"] = "config";
  j["command"] = cfg.command;
  if (cfg.command == "test" || cfg.command == "pit" || !cfg.model.empty()) {
    j["model"] = cfg.model;
    j["dof"] = cfg.dof;
  }
  if (!cfg.data_path.empty()) j["data"] = cfg.data_path;
  if (!cfg.theta_path.empty()) j["theta"] = cfg.theta_path;
  j["order"] = cfg.order;
  j["seed"] = cfg.seed;
  if (cfg.command == "test" || cfg.command == "mc") {
    j["B"] = cfg.B;
    j["lags"] = cfg.lags;
    j["levels"] = cfg.levels;
    j["max_redraws"] = cfg.max_redraws;
  }
  j["burn_in"] = cfg.burn_in;
  if (cfg.command == "simulate" || cfg.command == "mc") {
    j["dgp"] = cfg.dgp;
    j["alpha"] = cfg.alphas;
    j["T"] = cfg.T;
  }
  if (cfg.command == "mc") {
    j["reps"] = cfg.reps;
    j["null"] = cfg.null_model;
  }
  j["workers"] = cfg.workers;
  return j;
}

unsigned effective_workers(const RunConfig& cfg) {
  return cfg.workers == 0 ? default_workers() : cfg.workers;
}

ModelFamily family_for(const RunConfig& cfg, std::size_t d) {
  try {
    return ModelFamily::parse(cfg.model, d, cfg.dof);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

Permutation order_for(const RunConfig& cfg, std::size_t d) {
  if (cfg.order.empty()) return identity_order(d);
  return parse_order(cfg.order, d);
}

ModelParams read_theta(const std::string& path, const ModelFamily& family) {
  const json j = read_json_record(path);
  std::map<std::string, double> values;
  for (const auto& [key, value] : j.items()) {
    if (value.is_number()) values[key] = value.get<double>();
  }
  return params_from_named(family, values);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

// Opens `path` for writing, or returns `fallback` when the path is empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

int cmd_test(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require(!cfg.data_path.empty(), "test: --data is required");
  const SeriesMatrix data = read_csv_file(cfg.data_path);
  const ModelFamily family = family_for(cfg, data.cols());
  BootstrapConfig bc;
  bc.B = cfg.B;
  bc.seed = cfg.seed;
  bc.max_redraws = cfg.max_redraws;
  bc.alpha_levels = cfg.levels;
  bc.statistics.k_max = cfg.lags;
  bc.order = order_for(cfg, data.cols());
  bc.burn_in = cfg.burn_in;
  bc.workers = effective_workers(cfg);
  require(cfg.B >= 1, "test: --B must be at least 1");

  const BootstrapResult result = run_bootstrap(family, data, bc);

  RunConfig echoed = cfg;
  echoed.order = format_order(bc.order);
  Sink sink(cfg.output_path, out);
  std::ostream& report = sink.get();
  report << config_record(echoed).dump() << '\n';
  json theta;
  theta["record"] = "theta";
  for (const auto& [name, value] : named_parameters(family, result.fitted.theta)) theta[name] = value;
  theta["loglik"] = result.fitted.loglik;
  theta["converged"] = result.fitted.converged;
  theta["iterations"] = result.fitted.iterations;
  theta["T_effective"] = data.rows() - family.lags();
  report << theta.dump() << '\n';
  for (const auto& [name, value] : result.observed) {
    json s;
    s["record"] = "statistic";
    s["name"] = name;
    s["value"] = value;
    s["p_value"] = result.p_values.at(name);
    for (double a : cfg.levels) {
      std::ostringstream key;
      key << "reject_" << a;
      s[key.str()] = result.p_values.at(name) <= a;
    }
    report << s.dump() << '\n';
  }
  json summary;
  summary["record"] = "summary";
  summary["B_effective"] = result.replicates.size();
  summary["n_failures"] = result.n_failures;
  std::size_t redraws = 0;
  for (auto r : result.redraw_log) redraws += r;
  summary["redraws"] = redraws;
  summary["wall_seconds"] = result.seconds;
  summary["warnings"] = result.warnings;
  report << summary.dump() << '\n';

  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  if (!cfg.output_path.empty()) {
    out << "model " << family.name() << ", order " << echoed.order << ", T = " << data.rows()
        << ", B = " << result.replicates.size() << "\n";
    out << std::left << std::setw(12) << "statistic" << std::right << std::setw(14) << "value"
        << std::setw(10) << "p-value" << '\n';
    for (const auto& [name, value] : result.observed) {
      out << std::left << std::setw(12) << name << std::right << std::setw(14) << std::setprecision(6)
          << value << std::setw(10) << std::setprecision(4) << result.p_values.at(name) << '\n';
    }
  }
  return kOk;
}

int cmd_pit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require(!cfg.data_path.empty(), "pit: --data is required");
  const SeriesMatrix data = read_csv_file(cfg.data_path);
  const ModelFamily family = family_for(cfg, data.cols());
  const Permutation order = order_for(cfg, data.cols());
  ModelParams theta;
  if (!cfg.theta_path.empty()) {
    theta = read_theta(cfg.theta_path, family);
  } else {
    theta = estimate(family, data).theta;
  }
  const PitSequence u = pit_sequence(family, theta, data, order);

  Sink sink(cfg.output_path, out);
  std::ostream& csv = sink.get();
  csv << "u\n" << std::setprecision(17);
  for (double v : u.values()) csv << v << '\n';

  std::ostream& summary = cfg.output_path.empty() ? err : out;
  const double n = static_cast<double>(u.size());
  double mean = 0.0;
  for (double v : u.values()) mean += v;
  mean /= n;
  const ProcessNorms d1 = d1_stats(u.values());
  summary << std::setprecision(6) << "n " << u.size() << "\nmean " << mean << " (uniform: 0.5 +/- "
          << 3.0 / std::sqrt(12.0 * n) << ")\nks_distance " << d1.ks / std::sqrt(n)
          << " (1% band " << 1.63 / std::sqrt(n) << ")\n";
  if (u.size() > 2) {
    summary << "acf1 " << autocorrelation(u.values(), 1) << " acf2 "
            << autocorrelation(u.values(), 2) << " (1% band " << 2.58 / std::sqrt(n) << ")\n";
  }
  return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  RngStream rng(cfg.seed);
  SeriesMatrix sim;
  if (!cfg.dgp.empty()) {
    require(cfg.alphas.size() == 1, "simulate: give a single --alpha");
    sim = dgp_simulate(DgpSpec::parse(cfg.dgp, cfg.alphas.front(), cfg.T), rng);
  } else {
    require(!cfg.theta_path.empty(), "simulate: give --dgp, or --model with --theta-file");
    const json j = read_json_record(cfg.theta_path);
    std::size_t d = 0;
    for (const auto& item : j.items()) {
      if (item.key().rfind("mu", 0) == 0) ++d;
    }
    if (cfg.model.rfind("lstar", 0) == 0 || cfg.model == "h0nar") d = 2;
    require(d > 0, "simulate: cannot infer the dimension from '" + cfg.theta_path + "'");
    const ModelFamily family = family_for(cfg, d);
    InitPolicy init;
    init.burn_in = cfg.burn_in;
    sim = simulate(family, read_theta(cfg.theta_path, family), cfg.T, init, rng);
  }
  Sink sink(cfg.output_path, out);
  std::vector<std::string> header;
  for (std::size_t l = 0; l < sim.cols(); ++l) header.push_back("y" + std::to_string(l + 1));
  write_csv(sink.get(), sim, header);
  return kOk;
}

int cmd_mc(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require(!cfg.dgp.empty(), "mc: --dgp is required");
  require(cfg.reps >= 1 && cfg.B >= 1, "mc: --reps and --B must be positive");
  BootstrapConfig bc;
  bc.B = cfg.B;
  bc.seed = cfg.seed;
  bc.max_redraws = cfg.max_redraws;
  bc.alpha_levels = cfg.levels;
  bc.statistics.k_max = cfg.lags;
  bc.order = order_for(cfg, 2);
  bc.burn_in = cfg.burn_in;
  bc.workers = effective_workers(cfg);

  std::vector<ExperimentResult> results;
  for (double alpha : cfg.alphas) {
    const DgpSpec spec = DgpSpec::parse(cfg.dgp, alpha, cfg.T);
    const ModelFamily null_family =
        cfg.null_model.empty() ? default_null(spec.id) : ModelFamily::parse(cfg.null_model, 2, cfg.dof);
    results.push_back(run_experiment(spec, null_family, cfg.reps, bc));
    err << spec.name() << " alpha=" << spec.alpha << " done in " << results.back().seconds << " s\n";
  }
  if (!cfg.output_path.empty()) {
    Sink sink(cfg.output_path, out);
    write_tidy_csv(sink.get(), results);
  }
  std::vector<std::string> columns = core_statistic_names();
  for (const char* extra : {"LBQ_1", "LBQ_2", "LBQ_3", "LBQ_20", "LBQ_25", "JB"}) {
    columns.emplace_back(extra);
  }
  Sink table(cfg.table_path, out);
  write_rate_table(table.get(), results, columns);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Specification tests for multivariate conditional distributions"};
  app.require_subcommand(1);
  RunConfig flags;
  std::string config_path;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> given;

  auto bind = [&](CLI::App* sub, const std::string& name, auto member, const std::string& help) {
    CLI::Option* opt = sub->add_option(name, flags.*member, help);
    given.emplace_back(opt, [member, &flags](RunConfig& dst) { dst.*member = flags.*member; });
    return opt;
  };

  CLI::App* test = app.add_subcommand("test", "Fit a model and bootstrap its specification tests");
  CLI::App* pit = app.add_subcommand("pit", "Write the PIT sequence of a data set as CSV");
  CLI::App* sim = app.add_subcommand("simulate", "Simulate a data generating process as CSV");
  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo rejection rates for a DGP");

  for (CLI::App* sub : {test, pit, sim, mc}) {
    sub->add_option("--config", config_path, "JSON config file or a previous run report");
    bind(sub, "--output,-o", &RunConfig::output_path, "Output file (default: stdout)");
    bind(sub, "--seed", &RunConfig::seed, "Root random seed");
    bind(sub, "--dof", &RunConfig::dof, "Degrees of freedom for t models");
    bind(sub, "--burn-in", &RunConfig::burn_in, "Discarded start-up rows of dynamic simulations");
  }
  for (CLI::App* sub : {test, pit}) {
    bind(sub, "--data", &RunConfig::data_path, "Input CSV (rows = time)");
    bind(sub, "--model", &RunConfig::model, "Model family");
    bind(sub, "--order", &RunConfig::order, "Stacking order, e.g. 2,1");
  }
  for (CLI::App* sub : {test, mc}) {
    bind(sub, "--B", &RunConfig::B, "Bootstrap replicates");
    bind(sub, "--lags", &RunConfig::lags, "Largest lag of the two-parameter process");
    bind(sub, "--levels", &RunConfig::levels, "Test levels")->delimiter(',');
    bind(sub, "--workers", &RunConfig::workers, "Worker threads (0 = all cores)");
    bind(sub, "--max-redraws", &RunConfig::max_redraws, "Redraws per failed replicate");
  }
  for (CLI::App* sub : {pit, sim}) {
    bind(sub, "--theta-file", &RunConfig::theta_path, "JSON parameter file");
  }
  for (CLI::App* sub : {sim, mc}) {
    bind(sub, "--dgp", &RunConfig::dgp, "DGP id (A1..A3, B1..B6, C1..C6)");
    bind(sub, "--alpha", &RunConfig::alphas, "DGP alpha (mc accepts a list)")->delimiter(',');
    bind(sub, "--T", &RunConfig::T, "Sample size");
  }
  bind(sim, "--model", &RunConfig::model, "Model family (with --theta-file)");
  bind(mc, "--reps", &RunConfig::reps, "Monte Carlo repetitions");
  bind(mc, "--null", &RunConfig::null_model, "Null family or alias h0a, h0b, h0nar");
  bind(mc, "--order", &RunConfig::order, "Stacking order, e.g. 2,1");
  bind(mc, "--table", &RunConfig::table_path, "Write the rate table here (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  RunConfig cfg;
  for (CLI::App* sub : {test, pit, sim, mc}) {
    if (sub->parsed()) cfg.command = sub->get_name();
  }
  try {
    if (!config_path.empty()) apply_config_file(config_path, cfg);
    apply_environment(cfg);
    for (auto& [opt, copy] : given) {
      if (opt->count() > 0) copy(cfg);
    }
    if (cfg.command == "test") return cmd_test(cfg, out, err);
    if (cfg.command == "pit") return cmd_pit(cfg, out, err);
    if (cfg.command == "simulate") return cmd_simulate(cfg, out, err);
    return cmd_mc(cfg, out, err);
  } catch (const EstimationError& e) {
    err << "estimation failed: " << e.what() << '\n';
    return kEstimationFailure;
  } catch (const ExperimentError& e) {
    err << "experiment failed (rep " << e.rep() << ", seed " << e.seed() << "): " << e.what() << '\n';
    return kEstimationFailure;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace mvspec::cli
