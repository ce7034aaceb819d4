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

#include "btc/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "btc/errors.hpp"
#include "btc/lindblad.hpp"
#include "btc/meanfield.hpp"
#include "btc/parallel.hpp"
#include "btc/stabilizer.hpp"
#include "btc/statistics.hpp"
#include "btc/trajectory.hpp"

#ifndef BTC_VERSION
#define BTC_VERSION "unknown"
#endif

namespace btc {

namespace {

const std::vector<std::pair<ExperimentKind, std::string>>& kind_names() {
  static const std::vector<std::pair<ExperimentKind, std::string>> names = {
      {ExperimentKind::MeanfieldDynamics, "meanfield-dynamics"},
      {ExperimentKind::MeanfieldSweep, "meanfield-sweep"},
      {ExperimentKind::LindbladDynamics, "lindblad-dynamics"},
      {ExperimentKind::LindbladSweep, "lindblad-sweep"},
      {ExperimentKind::TrajectoryEnsemble, "trajectory-ensemble"},
      {ExperimentKind::UnravelingCompare, "unraveling-compare"},
      {ExperimentKind::Histogram, "histogram"},
      {ExperimentKind::FitSaturation, "fit-saturation"},
      {ExperimentKind::SolidAngle, "solid-angle"},
  };
  return names;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw InvalidArgument("config " + key + ": '" + v + "' is not a finite number");
  }
  return out;
}

long long parse_integer(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument("config " + key + ": '" + v + "' is not an integer");
  }
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  const long long x = parse_integer(key, v);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw InvalidArgument("config " + key + ": value out of range");
  }
  return static_cast<int>(x);
}

std::uint64_t parse_seed(const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw InvalidArgument("config seed: '" + v + "' is not a 64-bit unsigned integer");
  return out;
}

std::string join_numbers(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_number(v[i]);
  }
  return out;
}

std::string join_strings(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += v[i];
  }
  return out;
}

ModelParams model(const ExperimentConfig& c) { return {c.n_spins, c.omega0, c.kappa}; }

ModelParams model_at(const ExperimentConfig& c, double omega) {
  return {c.n_spins, omega * c.kappa, c.kappa};
}

InitialSampler sampler_of(const ExperimentConfig& c) {
  return c.sampler == "solid-angle" ? InitialSampler::SolidAngle : InitialSampler::UniformAngles;
}

// Column-safe unraveling tag: "mu=1.5,0.5" -> "mu1p5_0p5".
std::string column_tag(const Unraveling& u) {
  std::string out;
  for (char ch : u.label()) {
    if (ch == '=') continue;
    if (ch == ',') out += '_';
    else if (ch == '.') out += 'p';
    else if (ch == '-') out += 'm';
    else out += ch;
  }
  return out;
}

bool on_sampling_grid(double time, double dt, int stride) {
  const double steps = time / (dt * stride);
  return std::abs(steps - std::round(steps)) < 1e-9 * std::max(1.0, steps);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---- pipelines ----------------------------------------------------------

ExperimentResult meanfield_dynamics(const ExperimentConfig& c) {
  MfControls controls;
  controls.sample_dt = c.sample_dt;
  const auto traj = evolve_mf({0.0, 0.0, 1.0}, model(c), c.t_max, controls);
  ExperimentResult r;
  r.table.header = {"t", "m_x", "m_y", "m_z", "m2"};
  for (const auto& s : traj) {
    r.table.add_row({s.t, s.m.x, s.m.y, s.m.z, mf_magic_density(s.m).value});
  }
  return r;
}

ExperimentResult meanfield_sweep(const ExperimentConfig& c) {
  ExperimentResult r;
  r.table.header = {"omega", "m2_fixed_point", "m2_orbit_mean", "m2_orbit_stderr", "n_success"};
  for (double omega : c.omega_grid) {
    const auto avg = orbit_average_magic(model_at(c, omega), c.n_avg, c.tau, c.seed, sampler_of(c),
                                         {}, c.workers);
    r.table.add_row({omega, mf_fixed_point_magic(omega), avg.mean, avg.std_error,
                     static_cast<double>(avg.n_success)});
  }
  return r;
}

ExperimentResult lindblad_dynamics(const ExperimentConfig& c) {
  const ModelParams p = model(c);
  const auto ops = build_collective_ops(p);
  const auto table = pauli_class_table(p.n_spins);
  LindbladRun run{p, c.dt, c.t_max, c.sample_stride};
  ExperimentResult r;
  r.table.header = {"t", "m_x", "m_y", "m_z", "m2", "purity"};
  evolve_lindblad(run, pure_to_density(fully_polarized(p.n_spins, Direction::Up)),
                  [&](double t, const DenseState& rho) {
                    const auto m = magnetization(rho, ops);
                    r.table.add_row({t, m.x, m.y, m.z, table->sre(rho).m2_density, purity(rho)});
                  });
  return r;
}

ExperimentResult lindblad_sweep(const ExperimentConfig& c) {
  const auto table = pauli_class_table(c.n_spins);
  std::vector<std::vector<double>> rows(c.omega_grid.size());
  parallel_for(rows.size(), resolve_workers(c.workers), [&](std::size_t i) {
    const double omega = c.omega_grid[i];
    const ModelParams p = model_at(c, omega);
    LindbladRun run{p, c.dt, c.t_max, c.sample_stride};
    const auto ss = steady_state(run, pure_to_density(fully_polarized(p.n_spins, Direction::Up)),
                                 c.steady_lag, c.steady_tol);
    const auto m = magnetization(ss.state, build_collective_ops(p));
    rows[i] = {omega, table->sre(ss.state).m2_density, purity(ss.state), m.z,
               ss.converged ? 1.0 : 0.0, ss.t};
  });
  ExperimentResult r;
  r.table.header = {"omega", "m2", "purity", "m_z", "converged", "t"};
  for (auto& row : rows) r.table.add_row(std::move(row));
  return r;
}

std::vector<TrajectoryRecord> ensemble(const ExperimentConfig& c, const Unraveling& u,
                                       double t_max) {
  UnravelingSpec spec{u, c.dt, t_max, c.seed, c.n_traj, c.sample_stride};
  const ObservableSet obs{true, true, true, false};
  return run_ensemble(spec, model(c), fully_polarized(c.n_spins, Direction::Up), obs, c.workers);
}

const std::vector<std::pair<Quantity, std::string>>& ensemble_quantities() {
  static const std::vector<std::pair<Quantity, std::string>> q = {
      {Quantity::Mx, "m_x"}, {Quantity::My, "m_y"}, {Quantity::Mz, "m_z"},
      {Quantity::Sre, "m2"}, {Quantity::Entanglement, "s_half"}};
  return q;
}

ExperimentResult trajectory_ensemble(const ExperimentConfig& c) {
  const auto recs = ensemble(c, parse_unraveling(c.unraveling), c.t_max);
  ExperimentResult r;
  r.table.header = {"t"};
  for (const auto& [q, name] : ensemble_quantities()) {
    r.table.header.push_back(name + "_mean");
    r.table.header.push_back(name + "_se");
  }
  for (double t : recs.front().times) {
    std::vector<double> row{t};
    for (const auto& [q, name] : ensemble_quantities()) {
      const auto me = mean_and_error(record_values(recs, q, t));
      row.push_back(me.mean);
      row.push_back(me.std_error);
    }
    r.table.add_row(std::move(row));
  }
  return r;
}

ExperimentResult unraveling_compare(const ExperimentConfig& c) {
  const std::vector<std::pair<Quantity, std::string>> quantities = {
      {Quantity::Sre, "m2"}, {Quantity::Entanglement, "s_half"}, {Quantity::Mz, "m_z"}};
  ExperimentResult r;
  r.table.header = {"t"};
  std::vector<std::vector<TrajectoryRecord>> all;
  for (const auto& label : c.unravelings) {
    const Unraveling u = parse_unraveling(label);
    all.push_back(ensemble(c, u, c.t_max));
    for (const auto& [q, name] : quantities) {
      r.table.header.push_back(column_tag(u) + "_" + name + "_mean");
      r.table.header.push_back(column_tag(u) + "_" + name + "_se");
    }
  }
  for (double t : all.front().front().times) {
    std::vector<double> row{t};
    for (const auto& recs : all) {
      for (const auto& [q, name] : quantities) {
        const auto me = mean_and_error(record_values(recs, q, t));
        row.push_back(me.mean);
        row.push_back(me.std_error);
      }
    }
    r.table.add_row(std::move(row));
  }
  return r;
}

ExperimentResult histogram_experiment(const ExperimentConfig& c) {
  const std::vector<std::pair<Quantity, std::string>> quantities = {
      {Quantity::Sre, "m2"}, {Quantity::Entanglement, "s_half"}, {Quantity::Mz, "m_z"}};
  std::vector<Unraveling> us;
  std::vector<std::vector<TrajectoryRecord>> all;
  for (const auto& label : c.unravelings) {
    us.push_back(parse_unraveling(label));
    all.push_back(ensemble(c, us.back(), c.time));
  }
  ExperimentResult r;
  std::vector<std::vector<double>> columns;
  for (const auto& [q, name] : quantities) {
    std::vector<std::vector<double>> values;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& recs : all) {
      values.push_back(record_values(recs, q, c.time));
      const auto [mn, mx] = std::minmax_element(values.back().begin(), values.back().end());
      lo = std::min(lo, *mn);
      hi = std::max(hi, *mx);
    }
    if (hi == lo) {
      lo -= 0.5;
      hi += 0.5;
    }
    std::vector<double> left, right;
    for (std::size_t u = 0; u < us.size(); ++u) {
      const auto h = histogram(values[u], c.bins, std::make_pair(lo, hi));
      if (u == 0) {
        left.assign(h.bin_edges.begin(), h.bin_edges.end() - 1);
        right.assign(h.bin_edges.begin() + 1, h.bin_edges.end());
        r.table.header.push_back(name + "_bin_left");
        r.table.header.push_back(name + "_bin_right");
        columns.push_back(left);
        columns.push_back(right);
      }
      r.table.header.push_back(column_tag(us[u]) + "_" + name + "_density");
      columns.push_back(h.densities);
      const auto me = mean_and_error(values[u]);
      r.extra.emplace_back(column_tag(us[u]) + "_" + name + "_mean", format_number(me.mean));
      r.extra.emplace_back(column_tag(us[u]) + "_" + name + "_se", format_number(me.std_error));
    }
    for (std::size_t a = 0; a < us.size(); ++a) {
      for (std::size_t b = a + 1; b < us.size(); ++b) {
        const auto ks = ks_two_sample(values[a], values[b]);
        const std::string key = "ks_" + name + "_" + column_tag(us[a]) + "_vs_" + column_tag(us[b]);
        r.extra.emplace_back(key + "_statistic", format_number(ks.statistic));
        r.extra.emplace_back(key + "_p_value", format_number(ks.p_value));
      }
    }
  }
  for (int i = 0; i < c.bins; ++i) {
    std::vector<double> row;
    for (const auto& col : columns) row.push_back(col[i]);
    r.table.add_row(std::move(row));
  }
  return r;
}

std::size_t column_index(const CsvTable& t, const std::string& name, const std::string& path) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end()) throw InvalidArgument(path + ": missing column '" + name + "'");
  return static_cast<std::size_t>(it - t.header.begin());
}

ExperimentResult fit_experiment(const ExperimentConfig& c) {
  std::vector<std::pair<double, double>> points;
  if (!c.input_path.empty()) {
    const CsvTable in = read_csv(c.input_path);
    const auto io = column_index(in, "omega", c.input_path);
    const auto im = column_index(in, "m2_orbit_mean", c.input_path);
    for (const auto& row : in.rows) {
      if (row[io] > 1.0) points.emplace_back(row[io], row[im]);
    }
  } else {
    for (double omega : c.omega_grid) {
      if (!(omega > 1.0)) continue;
      const auto avg = orbit_average_magic(model_at(c, omega), c.n_avg, c.tau, c.seed,
                                           sampler_of(c), {}, c.workers);
      points.emplace_back(omega, avg.mean);
    }
  }
  if (points.size() < 5) throw InvalidArgument("fit-saturation needs >= 5 points with Omega > 1");
  const FitResult f = fit_saturation(points);
  ExperimentResult r;
  r.table.header = {"m2_sat", "alpha", "a", "residual", "n_points", "solid_angle_limit"};
  r.table.add_row({f.m2_sat, f.alpha, f.a, f.residual, static_cast<double>(points.size()),
                   solid_angle_limit(std::max(64, c.quad_points))});
  return r;
}

ExperimentResult solid_angle_experiment(const ExperimentConfig& c) {
  ExperimentResult r;
  r.table.header = {"points", "value"};
  for (int p = 64; p <= c.quad_points; p *= 2) {
    r.table.add_row({static_cast<double>(p), solid_angle_limit(p)});
  }
  if (r.table.rows.back()[0] != c.quad_points) {
    r.table.add_row({static_cast<double>(c.quad_points), solid_angle_limit(c.quad_points)});
  }
  return r;
}

}  // namespace

ExperimentKind parse_experiment(const std::string& name) {
  for (const auto& [kind, n] : kind_names()) {
    if (n == name) return kind;
  }
  throw InvalidArgument("unknown experiment '" + name + "'");
}

std::string experiment_name(ExperimentKind kind) {
  for (const auto& [k, n] : kind_names()) {
    if (k == kind) return n;
  }
  return "unknown";
}

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& [k, n] : kind_names()) out.push_back(n);
  return out;
}

void apply_config_value(ExperimentConfig& c, const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string v = trim(value_in);
  if (key == "experiment") c.experiment = parse_experiment(v);
  else if (key == "n_spins") c.n_spins = parse_int(key, v);
  else if (key == "omega0") c.omega0 = parse_double(key, v);
  else if (key == "kappa") c.kappa = parse_double(key, v);
  else if (key == "dt") c.dt = parse_double(key, v);
  else if (key == "t_max") c.t_max = parse_double(key, v);
  else if (key == "sample_stride") c.sample_stride = parse_int(key, v);
  else if (key == "sample_dt") c.sample_dt = parse_double(key, v);
  else if (key == "unraveling") c.unraveling = v;
  else if (key == "unravelings") c.unravelings = split(v, ';');
  else if (key == "seed") c.seed = parse_seed(v);
  else if (key == "n_traj") c.n_traj = parse_int(key, v);
  else if (key == "omega_grid") {
    c.omega_grid.clear();
    for (const auto& item : split(v, ',')) c.omega_grid.push_back(parse_double(key, item));
  } else if (key == "bins") c.bins = parse_int(key, v);
  else if (key == "time") c.time = parse_double(key, v);
  else if (key == "n_avg") c.n_avg = parse_int(key, v);
  else if (key == "tau") c.tau = parse_double(key, v);
  else if (key == "sampler") c.sampler = v;
  else if (key == "quad_points") c.quad_points = parse_int(key, v);
  else if (key == "steady_lag") c.steady_lag = parse_double(key, v);
  else if (key == "steady_tol") c.steady_tol = parse_double(key, v);
  else if (key == "input_path") c.input_path = v;
  else if (key == "output_path") c.output_path = v;
  else if (key == "workers") c.workers = parse_int(key, v);
  else throw InvalidArgument("unknown config key '" + key + "'");
}

void load_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    apply_config_value(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

void validate_config(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument("config: " + what);
  };
  require(c.n_spins >= 1, "n_spins must be >= 1");
  require(c.kappa > 0.0, "kappa must be > 0");
  require(c.omega0 >= 0.0, "omega0 must be >= 0");
  require(c.bins >= 1, "bins must be >= 1");
  require(c.sampler == "uniform" || c.sampler == "solid-angle",
          "sampler must be 'uniform' or 'solid-angle'");
  const auto needs_grid = [&] {
    require(!c.omega_grid.empty(), "omega_grid is required");
    for (double w : c.omega_grid) require(w >= 0.0, "omega_grid values must be >= 0");
  };
  const auto needs_stepping = [&] {
    require(c.dt > 0.0, "dt must be > 0");
    require(c.t_max >= c.dt, "t_max must be >= dt");
    require(c.sample_stride >= 1, "sample_stride must be >= 1");
  };
  const auto needs_trajectories = [&] {
    needs_stepping();
    require(c.n_traj >= 1, "n_traj must be >= 1");
  };
  const auto needs_orbits = [&] {
    require(c.n_avg >= 1, "n_avg must be >= 1");
    require(c.kappa * c.tau >= 100.0, "kappa * tau must be >= 100");
  };
  switch (c.experiment) {
    case ExperimentKind::MeanfieldDynamics:
      require(c.t_max > 0.0, "t_max must be > 0");
      require(c.sample_dt > 0.0, "sample_dt must be > 0");
      break;
    case ExperimentKind::MeanfieldSweep:
      needs_grid();
      needs_orbits();
      break;
    case ExperimentKind::LindbladDynamics:
      needs_stepping();
      break;
    case ExperimentKind::LindbladSweep:
      needs_stepping();
      needs_grid();
      require(c.steady_lag >= c.dt, "steady_lag must be >= dt");
      require(c.steady_tol > 0.0, "steady_tol must be > 0");
      break;
    case ExperimentKind::TrajectoryEnsemble:
      needs_trajectories();
      require(c.n_traj >= 2, "n_traj must be >= 2 for ensemble statistics");
      parse_unraveling(c.unraveling);
      break;
    case ExperimentKind::UnravelingCompare:
      needs_trajectories();
      require(c.n_traj >= 2, "n_traj must be >= 2 for ensemble statistics");
      require(!c.unravelings.empty(), "unravelings must not be empty");
      for (const auto& u : c.unravelings) parse_unraveling(u);
      break;
    case ExperimentKind::Histogram:
      needs_trajectories();
      require(c.n_traj >= 2, "n_traj must be >= 2 for histograms");
      require(!c.unravelings.empty(), "unravelings must not be empty");
      for (const auto& u : c.unravelings) parse_unraveling(u);
      require(c.time >= c.dt, "time must be >= dt");
      require(on_sampling_grid(c.time, c.dt, c.sample_stride),
              "time must be a multiple of dt * sample_stride");
      break;
    case ExperimentKind::FitSaturation:
      if (c.input_path.empty()) {
        needs_grid();
        needs_orbits();
        int above = 0;
        for (double w : c.omega_grid) above += w > 1.0;
        require(above >= 5, "fit-saturation needs >= 5 omega_grid values above 1");
      }
      break;
    case ExperimentKind::SolidAngle:
      require(c.quad_points >= 64, "quad_points must be >= 64");
      break;
  }
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& c) {
  return {
      {"experiment", experiment_name(c.experiment)},
      {"n_spins", std::to_string(c.n_spins)},
      {"omega0", format_number(c.omega0)},
      {"kappa", format_number(c.kappa)},
      {"dt", format_number(c.dt)},
      {"t_max", format_number(c.t_max)},
      {"sample_stride", std::to_string(c.sample_stride)},
      {"sample_dt", format_number(c.sample_dt)},
      {"unraveling", c.unraveling},
      {"unravelings", join_strings(c.unravelings)},
      {"seed", std::to_string(c.seed)},
      {"n_traj", std::to_string(c.n_traj)},
      {"omega_grid", join_numbers(c.omega_grid)},
      {"bins", std::to_string(c.bins)},
      {"time", format_number(c.time)},
      {"n_avg", std::to_string(c.n_avg)},
      {"tau", format_number(c.tau)},
      {"sampler", c.sampler},
      {"quad_points", std::to_string(c.quad_points)},
      {"steady_lag", format_number(c.steady_lag)},
      {"steady_tol", format_number(c.steady_tol)},
      {"input_path", c.input_path},
      {"output_path", c.output_path},
  };
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc()) throw ComputeError("number formatting failed");
  return std::string(buf, ptr);
}

void CsvTable::add_row(std::vector<double> row) {
  if (row.size() != header.size()) throw ComputeError("CSV row width does not match the header");
  rows.push_back(std::move(row));
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << out;
  if (!f.flush()) throw IoError("failed writing " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(f, line)) throw InvalidArgument(path + ": empty CSV");
  t.header = split(line, ',');
  int lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line, ',')) {
      if (cell == "nan") row.push_back(std::numeric_limits<double>::quiet_NaN());
      else row.push_back(parse_double(path + ":" + std::to_string(lineno), cell));
    }
    if (row.size() != t.header.size()) {
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": wrong number of cells");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

ExperimentResult compute_experiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case ExperimentKind::MeanfieldDynamics: return meanfield_dynamics(config);
    case ExperimentKind::MeanfieldSweep: return meanfield_sweep(config);
    case ExperimentKind::LindbladDynamics: return lindblad_dynamics(config);
    case ExperimentKind::LindbladSweep: return lindblad_sweep(config);
    case ExperimentKind::TrajectoryEnsemble: return trajectory_ensemble(config);
    case ExperimentKind::UnravelingCompare: return unraveling_compare(config);
    case ExperimentKind::Histogram: return histogram_experiment(config);
    case ExperimentKind::FitSaturation: return fit_experiment(config);
    case ExperimentKind::SolidAngle: return solid_angle_experiment(config);
  }
  throw InvalidArgument("unknown experiment");
}

std::string run_experiment(const ExperimentConfig& config_in) {
  ExperimentConfig config = config_in;
  if (config.output_path.empty()) config.output_path = experiment_name(config.experiment) + ".csv";
  validate_config(config);
  const ExperimentResult result = compute_experiment(config);

  write_csv(config.output_path, result.table);
  std::string meta;
  for (const auto& [k, v] : config_entries(config)) meta += k + "=" + v + "\n";
  for (const auto& [k, v] : result.extra) meta += k + "=" + v + "\n";
  meta += "version=" + version_string() + "\n";
  meta += "timestamp=" + utc_timestamp() + "\n";
  const std::string meta_path = config.output_path + ".meta";
  std::ofstream f(meta_path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + meta_path + " for writing");
  f << meta;
  if (!f.flush()) throw IoError("failed writing " + meta_path);
  return config.output_path;
}

std::string version_string() { return "btc-magic " BTC_VERSION; }

}  // namespace btc
