// Copyright 2026 The btc-magic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// btc: command-line driver for the experiment pipelines.
//
//   btc <experiment> [--config FILE] [flags]
//
// Flags override values read from the config file. Exit codes: 0 success,
// 1 configuration error, 2 computation error, 3 I/O error.

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "btc/errors.hpp"
#include "btc/experiment.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitCompute = 2;
constexpr int kExitIo = 3;

struct Flag {
  const char* names;
  const char* key;
  const char* help;
};

// Each flag maps onto one config key; values go through the same parser as
// the config file.
const std::vector<Flag> kFlags = {
    {"--n,--n-spins", "n_spins", "number of spins N"},
    {"--omega,--omega0", "omega0", "drive frequency omega0 (units of kappa)"},
    {"--kappa", "kappa", "collective decay rate"},
    {"--dt", "dt", "time step for Lindblad and trajectory integration"},
    {"--t-max", "t_max", "final time"},
    {"--stride", "sample_stride", "steps between recorded samples"},
    {"--sample-dt", "sample_dt", "mean-field output spacing"},
    {"--unraveling", "unraveling", "qj, qsd, mu or mu=<re>[,<im>]"},
    {"--seed", "seed", "master seed"},
    {"--traj,--n-traj", "n_traj", "trajectories per ensemble"},
    {"--bins", "bins", "histogram bins"},
    {"--time", "time", "histogram sampling time"},
    {"--n-avg", "n_avg", "initial conditions per orbit average"},
    {"--tau", "tau", "orbit-average integration time"},
    {"--sampler", "sampler", "initial-condition sampler: uniform or solid-angle"},
    {"--points", "quad_points", "solid-angle quadrature resolution"},
    {"--steady-lag", "steady_lag", "lag between compared steady-state snapshots"},
    {"--steady-tol", "steady_tol", "steady-state trace-distance tolerance"},
    {"--input", "input_path", "fit-saturation: meanfield-sweep CSV"},
    {"-o,--output", "output_path", "output CSV path (default <experiment>.csv)"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective-spin time-crystal simulator: dynamics, magic and entanglement"};
  std::string experiment;
  std::string config_path;
  app.add_option("experiment", experiment, "experiment to run")
      ->required()
      ->check(CLI::IsMember(btc::experiment_names()));
  app.add_option("-c,--config", config_path, "key=value config file");

  std::vector<std::string> values(kFlags.size());
  std::vector<CLI::Option*> options;
  for (std::size_t i = 0; i < kFlags.size(); ++i) {
    options.push_back(app.add_option(kFlags[i].names, values[i], kFlags[i].help));
  }
  std::vector<double> omega_grid;
  auto* grid_opt = app.add_option("--omega-grid", omega_grid, "drive values Omega for sweeps")
                       ->delimiter(',');
  std::vector<std::string> unravelings;
  auto* unr_opt = app.add_option("--unravelings", unravelings,
                                 "unravelings to compare (space or ';' separated)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  btc::ExperimentConfig config;
  try {
    if (!config_path.empty()) btc::load_config_file(config, config_path);
    config.experiment = btc::parse_experiment(experiment);
    for (std::size_t i = 0; i < kFlags.size(); ++i) {
      if (options[i]->count() > 0) btc::apply_config_value(config, kFlags[i].key, values[i]);
    }
    if (grid_opt->count() > 0) config.omega_grid = omega_grid;
    if (unr_opt->count() > 0) {
      std::string joined;
      for (const auto& u : unravelings) joined += (joined.empty() ? "" : ";") + u;
      btc::apply_config_value(config, "unravelings", joined);
    }
    const std::string out = btc::run_experiment(config);
    std::cout << "wrote " << out << " and " << out << ".meta\n";
    return 0;
  } catch (const btc::InvalidArgument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const btc::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return kExitCompute;
  }
}
