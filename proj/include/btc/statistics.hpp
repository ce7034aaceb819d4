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

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "btc/trajectory.hpp"

namespace btc {

struct MeanError {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n)
};

// Throws InvalidArgument on an empty sample. One value gives std_error 0.
MeanError mean_and_error(const std::vector<double>& values);

struct HistogramResult {
  std::vector<double> bin_edges;  // bins + 1
  std::vector<double> densities;  // bins, sum(density * width) = 1
};

// Probability-density histogram over [min, max] of the data (or the given
// range). The last bin is closed. If all values coincide the range becomes
// [v - 0.5, v + 0.5].
HistogramResult histogram(const std::vector<double>& values, int bins,
                          std::optional<std::pair<double, double>> range = std::nullopt);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Kolmogorov distribution tail Q(lambda) = 2 sum_k (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
// Q((sqrt(ne) + 0.12 + 0.11 / sqrt(ne)) D), ne = n m / (n + m).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

enum class Quantity { Mx, My, Mz, Sre, Entanglement };

Quantity parse_quantity(const std::string& name);
std::string quantity_name(Quantity q);

// Value of `q` at sample `time` (must lie on the record's sampling grid).
double record_value(const TrajectoryRecord& rec, Quantity q, double time);
std::vector<double> record_values(const std::vector<TrajectoryRecord>& records, Quantity q,
                                  double time);

struct EnsembleStatistics {
  double mean = 0.0;
  double std_error = 0.0;
  HistogramResult histogram;
};

// Needs >= 2 records.
EnsembleStatistics ensemble_statistics(const std::vector<TrajectoryRecord>& records, Quantity q,
                                       double time, int bins = 100);

}  // namespace btc
