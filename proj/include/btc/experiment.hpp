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

// Experiment driver: configuration, CSV/metadata serialization and the
// named pipelines behind the command-line tool.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace btc {

enum class ExperimentKind {
  MeanfieldDynamics,
  MeanfieldSweep,
  LindbladDynamics,
  LindbladSweep,
  TrajectoryEnsemble,
  UnravelingCompare,
  Histogram,
  FitSaturation,
  SolidAngle,
};

ExperimentKind parse_experiment(const std::string& name);
std::string experiment_name(ExperimentKind kind);
std::vector<std::string> experiment_names();

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::MeanfieldDynamics;

  // Model.
  int n_spins = 10;
  double omega0 = 2.0;
  double kappa = 1.0;

  // Time stepping (Lindblad and trajectories) and sampling.
  double dt = 1e-3;
  double t_max = 10.0;
  int sample_stride = 100;
  double sample_dt = 0.01;  // mean-field output grid

  // Trajectories.
  std::string unraveling = "qj";
  std::vector<std::string> unravelings = {"qj", "mu=2", "qsd"};
  std::uint64_t seed = 1;
  int n_traj = 100;

  // Sweeps, histograms, orbit averages, fits.
  std::vector<double> omega_grid;
  int bins = 100;
  double time = 8.0;
  int n_avg = 200;
  double tau = 400.0;
  std::string sampler = "uniform";  // or "solid-angle"
  int quad_points = 256;
  double steady_lag = 1.0;
  double steady_tol = 1e-8;
  std::string input_path;  // fit-saturation: meanfield-sweep CSV

  std::string output_path;  // defaults to <experiment>.csv
  int workers = 0;          // 0: BTC_THREADS or hardware concurrency
};

// Sets one field from its key=value spelling. Throws InvalidArgument on an
// unknown key or unparseable value.
void apply_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);

// Reads key=value lines ('#' starts a comment, blank lines ignored).
// Throws IoError if the file cannot be read, InvalidArgument on bad lines.
void load_config_file(ExperimentConfig& config, const std::string& path);

// Checks the fields the selected experiment needs. Throws InvalidArgument.
void validate_config(const ExperimentConfig& config);

// Every setting as ordered key=value pairs (the .meta content).
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& config);

// 17 significant digits in %.17g style; round-trips through strtod.
std::string format_number(double value);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
};

// LF line endings, comma separated, header first. Throws IoError.
void write_csv(const std::string& path, const CsvTable& table);

// Reads a numeric CSV written by write_csv.
CsvTable read_csv(const std::string& path);

struct ExperimentResult {
  CsvTable table;
  // Extra key=value lines for the metadata sidecar (test statistics,
  // fitted parameters, ...).
  std::vector<std::pair<std::string, std::string>> extra;
};

// Runs the pipeline without touching the file system (except
// fit-saturation's optional input).
ExperimentResult compute_experiment(const ExperimentConfig& config);

// Validates, computes, writes <output> and <output>.meta. Returns the
// output path.
std::string run_experiment(const ExperimentConfig& config);

std::string version_string();

}  // namespace btc
