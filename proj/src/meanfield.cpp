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

#include "btc/meanfield.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include "btc/ode.hpp"
#include "btc/parallel.hpp"
#include "btc/rng.hpp"

namespace btc {

namespace {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

Vec3 to_vec(const BlochVector& m) { return {m.x, m.y, m.z}; }
BlochVector to_bloch(const Vec3& v) { return {v[0], v[1], v[2]}; }

Vec3 rhs(const Vec3& m, double w, double k) {
  return {k * m[0] * m[2], -w * m[2] + k * m[1] * m[2], w * m[1] - k * (m[0] * m[0] + m[1] * m[1])};
}

Mat3 jacobian(const Vec3& m, double w, double k) {
  Mat3 j;
  j << k * m[2], 0.0, k * m[0],
       0.0, k * m[2], -w + k * m[1],
       -2.0 * k * m[0], w - 2.0 * k * m[1], 0.0;
  return j;
}

void check_mf_inputs(const BlochVector& m0, const ModelParams& params, double t_max) {
  if (!(params.kappa > 0.0) || !(params.omega0 >= 0.0)) {
    throw InvalidArgument("mean field needs kappa > 0 and omega0 >= 0");
  }
  if (!(m0.norm2() <= 1.0 + 1e-9)) throw InvalidArgument("initial Bloch vector has |m| > 1");
  if (!(t_max > 0.0)) throw InvalidArgument("t_max must be > 0");
}

BdfSolver<3> make_solver(const BlochVector& m0, const ModelParams& params, double t_max,
                         const MfControls& c) {
  const double w = params.omega0;
  const double k = params.kappa;
  BdfOptions opt;
  opt.rtol = c.rtol;
  opt.atol = c.atol;
  opt.max_step = c.max_step;
  return BdfSolver<3>([w, k](double, const Vec3& m) { return rhs(m, w, k); },
                      [w, k](double, const Vec3& m) { return jacobian(m, w, k); }, 0.0,
                      to_vec(m0), t_max, opt);
}

// Steps the solver once, projecting back onto |m| = radius if requested.
void advance(BdfSolver<3>& solver, double radius, const MfControls& c) {
  solver.step();
  if (c.project_norm && radius > 0.0) {
    const double r = solver.y().norm();
    if (r > 0.0) solver.set_state(solver.y() * (radius / r));
  }
}

Vec3 sample(const BdfSolver<3>& solver, double t, double radius, const MfControls& c) {
  Vec3 v = solver.dense(t);
  if (c.project_norm && radius > 0.0) {
    const double r = v.norm();
    if (r > 0.0) v *= radius / r;
  }
  return v;
}

}  // namespace

BlochVector mf_rhs(const BlochVector& m, const ModelParams& params) {
  return to_bloch(rhs(to_vec(m), params.omega0, params.kappa));
}

std::vector<MfSample> evolve_mf(const BlochVector& m0, const ModelParams& params, double t_max,
                                const MfControls& controls) {
  check_mf_inputs(m0, params, t_max);
  if (!(controls.sample_dt > 0.0)) throw InvalidArgument("sample_dt must be > 0");
  auto solver = make_solver(m0, params, t_max, controls);
  std::vector<MfSample> out;
  out.push_back({0.0, m0});
  long j = 1;
  const double radius = m0.norm();
  while (!solver.finished()) {
    advance(solver, radius, controls);
    for (double tj = j * controls.sample_dt; tj <= solver.t() && tj < t_max;
         tj = (++j) * controls.sample_dt) {
      out.push_back({tj, to_bloch(sample(solver, tj, radius, controls))});
    }
  }
  out.push_back({t_max, to_bloch(solver.y())});
  return out;
}

std::vector<MfSample> evolve_mf_rk4(const BlochVector& m0, const ModelParams& params,
                                    double t_max, double dt, int sample_every) {
  check_mf_inputs(m0, params, t_max);
  if (!(dt > 0.0) || sample_every < 1) throw InvalidArgument("rk4 needs dt > 0, sample_every >= 1");
  const double w = params.omega0;
  const double k = params.kappa;
  auto f = [w, k](double, const Vec3& m) { return rhs(m, w, k); };
  const long n = std::lround(t_max / dt);
  Vec3 y = to_vec(m0);
  std::vector<MfSample> out;
  out.push_back({0.0, m0});
  for (long s = 1; s <= n; ++s) {
    y = rk4_step<Vec3>(f, (s - 1) * dt, y, dt);
    if (s % sample_every == 0 || s == n) out.push_back({s * dt, to_bloch(y)});
  }
  return out;
}

FlaggedValue mf_magic_density(const BlochVector& m) {
  const double x2 = m.x * m.x;
  const double y2 = m.y * m.y;
  const double z2 = m.z * m.z;
  FlaggedValue r;
  r.value = -std::log(0.5 * (1.0 + x2 * x2 + y2 * y2 + z2 * z2));
  r.norm_violation = std::abs(m.norm() - 1.0) > 1e-6;
  return r;
}

BlochVector mf_fixed_point(double omega, Branch branch) {
  if (!(omega >= 0.0)) throw InvalidArgument("Omega must be >= 0");
  const double sign = branch == Branch::Plus ? 1.0 : -1.0;
  if (omega < 1.0) return {0.0, omega, sign * std::sqrt(1.0 - omega * omega)};
  const double inv = 1.0 / omega;
  return {sign * std::sqrt(1.0 - inv * inv), inv, 0.0};
}

double mf_fixed_point_magic(double omega) {
  if (!(omega >= 0.0)) throw InvalidArgument("Omega must be >= 0");
  const double u = omega < 1.0 ? omega * omega : 1.0 / (omega * omega);
  return -std::log(u * u - u + 1.0);
}

double long_time_average_magic(const BlochVector& m0, const ModelParams& params, double tau,
                               const MfControls& controls) {
  check_mf_inputs(m0, params, tau);
  if (!(controls.sample_dt > 0.0)) throw InvalidArgument("sample_dt must be > 0");
  auto solver = make_solver(m0, params, tau, controls);
  const double t0 = 0.5 * tau;
  const long n = std::max<long>(1, std::lround(std::ceil((tau - t0) / controls.sample_dt)));
  const double h = (tau - t0) / n;
  const double radius = m0.norm();
  double sum = 0.0;
  long i = 0;
  while (i <= n) {
    if (solver.finished()) break;
    advance(solver, radius, controls);
    for (; i <= n; ++i) {
      const double ti = i == n ? tau : t0 + i * h;
      if (ti > solver.t()) break;
      const BlochVector m = to_bloch(i == n ? solver.y() : sample(solver, ti, radius, controls));
      const double v = mf_magic_density(m).value;
      sum += (i == 0 || i == n) ? 0.5 * v : v;
    }
  }
  if (i <= n) throw ComputeError("orbit sampling ended early");
  return sum * h / (tau - t0);
}

OrbitAverage orbit_average_magic(const ModelParams& params, int n_avg, double tau,
                                 std::uint64_t seed, InitialSampler sampler,
                                 const MfControls& controls, int workers) {
  if (n_avg < 1) throw InvalidArgument("n_avg must be >= 1");
  if (!(params.kappa * tau >= 100.0)) throw InvalidArgument("orbit average needs kappa * tau >= 100");
  OrbitAverage res;
  res.per_orbit.assign(static_cast<std::size_t>(n_avg), std::numeric_limits<double>::quiet_NaN());
  parallel_for(res.per_orbit.size(), resolve_workers(workers), [&](std::size_t k) {
    Rng rng = Rng::stream(seed, k);
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double theta =
        sampler == InitialSampler::UniformAngles ? std::numbers::pi * u1 : std::acos(1.0 - 2.0 * u1);
    const double phi = 2.0 * std::numbers::pi * u2;
    const BlochVector m0{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                         std::cos(theta)};
    try {
      res.per_orbit[k] = long_time_average_magic(m0, params, tau, controls);
    } catch (const ComputeError&) {
      // counted as a failure below
    }
  });
  double sum = 0.0;
  for (double v : res.per_orbit) {
    if (std::isnan(v)) {
      ++res.n_failed;
    } else {
      ++res.n_success;
      sum += v;
    }
  }
  if (10 * res.n_success < 9 * n_avg) {
    throw ComputeError("orbit average: only " + std::to_string(res.n_success) + " of " +
                       std::to_string(n_avg) + " initial conditions integrated");
  }
  res.mean = sum / res.n_success;
  double ss = 0.0;
  for (double v : res.per_orbit) {
    if (!std::isnan(v)) ss += (v - res.mean) * (v - res.mean);
  }
  res.std_error =
      res.n_success > 1 ? std::sqrt(ss / (res.n_success - 1)) / std::sqrt(res.n_success) : 0.0;
  return res;
}

double solid_angle_integrand(double theta, double phi) {
  const double s = std::sin(theta);
  return mf_magic_density({s * std::cos(phi), s * std::sin(phi), std::cos(theta)}).value;
}

double solid_angle_limit(int points) {
  if (points < 64) throw InvalidArgument("solid-angle quadrature needs >= 64 points");
  const double du = 2.0 / points;
  const double dphi = 2.0 * std::numbers::pi / points;
  double total = 0.0;
  for (int i = 0; i < points; ++i) {
    const double theta = std::acos(-1.0 + (i + 0.5) * du);
    double row = 0.0;
    for (int j = 0; j < points; ++j) row += solid_angle_integrand(theta, j * dphi);
    total += row * dphi;
  }
  return total * du / (4.0 * std::numbers::pi);
}

double saturation_law(double x, double m2_sat, double alpha, double a) {
  const double p = std::pow(x, alpha);
  return m2_sat * p / (a + p);
}

namespace {

struct SaturationFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  std::vector<double> x, y;

  int inputs() const { return 3; }
  int values() const { return static_cast<int>(x.size()); }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
    for (std::size_t i = 0; i < x.size(); ++i) f[i] = saturation_law(x[i], p[0], p[1], p[2]) - y[i];
    return 0;
  }

  int df(const Eigen::VectorXd& p, Eigen::MatrixXd& j) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double q = std::pow(x[i], p[1]);
      const double d = p[2] + q;
      j(i, 0) = q / d;
      j(i, 1) = p[0] * p[2] * q * std::log(x[i]) / (d * d);
      j(i, 2) = -p[0] * q / (d * d);
    }
    return 0;
  }
};

}  // namespace

FitResult fit_saturation(const std::vector<std::pair<double, double>>& points,
                         std::array<double, 3> initial, double omega_c) {
  if (points.size() < 5) throw InvalidArgument("saturation fit needs >= 5 points");
  SaturationFunctor fn;
  for (const auto& [omega, m2] : points) {
    if (!(omega > omega_c)) throw InvalidArgument("saturation fit needs all Omega > Omega_c");
    fn.x.push_back(omega - omega_c);
    fn.y.push_back(m2);
  }
  Eigen::VectorXd p(3);
  p << initial[0], initial[1], initial[2];
  Eigen::LevenbergMarquardt<SaturationFunctor> lm(fn);
  lm.parameters.xtol = 1e-10;
  lm.parameters.ftol = 1e-14;
  lm.parameters.maxfev = 2000;
  const auto status = lm.minimize(p);

  FitResult r;
  r.m2_sat = p[0];
  r.alpha = p[1];
  r.a = p[2];
  Eigen::VectorXd f(fn.values());
  fn(p, f);
  r.residual = f.squaredNorm();
  r.evaluations = static_cast<int>(lm.nfev);
  using Eigen::LevenbergMarquardtSpace::Status;
  const bool ok = status == Status::RelativeReductionTooSmall ||
                  status == Status::RelativeErrorTooSmall ||
                  status == Status::RelativeErrorAndReductionTooSmall ||
                  status == Status::CosinusTooSmall;
  if (!ok || !std::isfinite(r.residual)) {
    throw FitError("saturation fit did not converge (status " + std::to_string(int(status)) + ")", r);
  }
  return r;
}

}  // namespace btc
