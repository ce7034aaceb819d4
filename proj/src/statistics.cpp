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

#include "btc/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "btc/errors.hpp"

namespace btc {

MeanError mean_and_error(const std::vector<double>& values) {
  if (values.empty()) throw InvalidArgument("mean of an empty sample");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  MeanError r;
  r.mean = sum / n;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  if (*mn == *mx) {
    r.mean = *mn;
  } else if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - r.mean) * (v - r.mean);
    r.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return r;
}

HistogramResult histogram(const std::vector<double>& values, int bins,
                          std::optional<std::pair<double, double>> range) {
  if (bins < 1) throw InvalidArgument("bins must be >= 1");
  if (values.empty()) throw InvalidArgument("histogram of an empty sample");
  double lo, hi;
  if (range) {
    lo = range->first;
    hi = range->second;
    if (!(hi > lo)) throw InvalidArgument("histogram range must have hi > lo");
  } else {
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    lo = *mn;
    hi = *mx;
    if (hi == lo) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  HistogramResult r;
  r.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
  const double width = (hi - lo) / bins;
  for (int i = 0; i <= bins; ++i) r.bin_edges[i] = lo + i * width;
  r.bin_edges[bins] = hi;
  std::vector<long> counts(static_cast<std::size_t>(bins), 0);
  long used = 0;
  for (double v : values) {
    if (v < lo || v > hi) continue;
    int b = static_cast<int>(std::floor((v - lo) / width));
    b = std::clamp(b, 0, bins - 1);
    ++counts[b];
    ++used;
  }
  if (used == 0) throw InvalidArgument("no values inside the histogram range");
  r.densities.resize(static_cast<std::size_t>(bins));
  for (int i = 0; i < bins; ++i) {
    r.densities[i] = counts[i] / (static_cast<double>(used) * (r.bin_edges[i + 1] - r.bin_edges[i]));
  }
  return r;
}

double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("KS test needs two non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = na * nb / (na + nb);
  const double s = std::sqrt(ne);
  return {d, kolmogorov_q((s + 0.12 + 0.11 / s) * d)};
}

Quantity parse_quantity(const std::string& name) {
  if (name == "m_x") return Quantity::Mx;
  if (name == "m_y") return Quantity::My;
  if (name == "m_z") return Quantity::Mz;
  if (name == "m2") return Quantity::Sre;
  if (name == "s_half") return Quantity::Entanglement;
  throw InvalidArgument("unknown quantity '" + name + "' (m_x, m_y, m_z, m2, s_half)");
}

std::string quantity_name(Quantity q) {
  switch (q) {
    case Quantity::Mx: return "m_x";
    case Quantity::My: return "m_y";
    case Quantity::Mz: return "m_z";
    case Quantity::Sre: return "m2";
    case Quantity::Entanglement: return "s_half";
  }
  return "unknown";
}

namespace {

const std::vector<double>& series(const TrajectoryRecord& rec, Quantity q) {
  switch (q) {
    case Quantity::Mx: return rec.m_x;
    case Quantity::My: return rec.m_y;
    case Quantity::Mz: return rec.m_z;
    case Quantity::Sre: return rec.sre_density;
    case Quantity::Entanglement: return rec.entanglement;
  }
  throw InvalidArgument("unknown quantity");
}

}  // namespace

double record_value(const TrajectoryRecord& rec, Quantity q, double time) {
  const auto& s = series(rec, q);
  if (s.size() != rec.times.size()) {
    throw InvalidArgument("quantity " + quantity_name(q) + " was not recorded");
  }
  const double tol = 1e-9 * std::max(1.0, std::abs(time));
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    if (std::abs(rec.times[i] - time) <= tol) return s[i];
  }
  throw InvalidArgument("time " + std::to_string(time) + " is not on the sampling grid");
}

std::vector<double> record_values(const std::vector<TrajectoryRecord>& records, Quantity q,
                                  double time) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(record_value(r, q, time));
  return out;
}

EnsembleStatistics ensemble_statistics(const std::vector<TrajectoryRecord>& records, Quantity q,
                                       double time, int bins) {
  if (records.size() < 2) throw InvalidArgument("ensemble statistics need >= 2 records");
  const auto values = record_values(records, q, time);
  const MeanError me = mean_and_error(values);
  return {me.mean, me.std_error, histogram(values, bins)};
}

}  // namespace btc
