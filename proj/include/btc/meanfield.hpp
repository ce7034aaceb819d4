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

// Thermodynamic-limit (mean-field) layer for the Bloch vector m = <S>/S:
//
//   dm_x/dt = k m_x m_z
//   dm_y/dt = -w0 m_z + k m_y m_z
//   dm_z/dt =  w0 m_y - k (m_x^2 + m_y^2)
//
// plus fixed points, the product-state magic density, orbit averages,
// the large-drive solid-angle limit and the saturation-law fit.

#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "btc/collective.hpp"
#include "btc/errors.hpp"

namespace btc {

// Only omega0 and kappa are read; n_spins is ignored.
BlochVector mf_rhs(const BlochVector& m, const ModelParams& params);

struct MfControls {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.05;     // in units of 1/kappa
  double sample_dt = 0.01;    // output grid spacing
  // Rescale the state to |m0| after every accepted step and on output.
  // The flow conserves |m| exactly; BDF alone drifts secularly (about
  // 1e-6 over kappa t = 1000 at rtol = 1e-10).
  bool project_norm = true;
};

struct MfSample {
  double t = 0.0;
  BlochVector m;
};

// Adaptive BDF (orders 1-5). Samples on the grid t = j * sample_dt, plus
// t_max. Throws ComputeError with the failure time if the solver breaks
// down, InvalidArgument if |m0| > 1.
std::vector<MfSample> evolve_mf(const BlochVector& m0, const ModelParams& params, double t_max,
                                const MfControls& controls = {});

// Fixed-step RK4 reference; samples every `sample_every` steps and at the end.
std::vector<MfSample> evolve_mf_rk4(const BlochVector& m0, const ModelParams& params,
                                    double t_max, double dt, int sample_every = 1);

struct FlaggedValue {
  double value = 0.0;
  bool norm_violation = false;  // |m| deviates from 1 by more than 1e-6
};

// -log((1 + m_x^4 + m_y^4 + m_z^4) / 2), the magic density of the
// product state with Bloch vector m.
FlaggedValue mf_magic_density(const BlochVector& m);

enum class Branch { Plus, Minus };

// Fixed point of the flow at drive Omega = omega0 / kappa. For Omega < 1
// the branch picks the sign of m_z, otherwise the sign of m_x. The
// attracting point of the magnetized phase is Branch::Minus.
BlochVector mf_fixed_point(double omega, Branch branch);

// Magic density of the fixed point.
double mf_fixed_point_magic(double omega);

enum class InitialSampler {
  UniformAngles,  // theta uniform on [0, pi], phi uniform on [0, 2 pi]
  SolidAngle,     // uniform on the sphere
};

struct OrbitAverage {
  double mean = 0.0;
  double std_error = 0.0;
  int n_success = 0;
  int n_failed = 0;
  std::vector<double> per_orbit;  // NaN for failed initial conditions
};

// Time average of the magic density over [tau/2, tau] for one initial
// condition (trapezoid rule on a uniform grid).
double long_time_average_magic(const BlochVector& m0, const ModelParams& params, double tau,
                               const MfControls& controls = {});

// Draws initial condition k from Rng::stream(seed, k), averages over
// n_avg of them. Requires kappa * tau >= 100 and at least 90% successful
// integrations. Independent of the worker count.
OrbitAverage orbit_average_magic(const ModelParams& params, int n_avg, double tau,
                                 std::uint64_t seed,
                                 InitialSampler sampler = InitialSampler::UniformAngles,
                                 const MfControls& controls = {}, int workers = 0);

// Magic density of the product state along (theta, phi).
double solid_angle_integrand(double theta, double phi);

// Average of the integrand over the unit sphere, on a points x points grid
// (midpoint rule in cos(theta), periodic trapezoid in phi). points >= 64.
double solid_angle_limit(int points);

struct FitResult {
  double m2_sat = 0.0;
  double alpha = 0.0;
  double a = 0.0;
  double residual = 0.0;  // sum of squared errors
  int evaluations = 0;
};

// m2_sat * x^alpha / (a + x^alpha), x = Omega - Omega_c.
double saturation_law(double x, double m2_sat, double alpha, double a);

class FitError : public ComputeError {
 public:
  FitError(const std::string& what, FitResult best) : ComputeError(what), best_(best) {}
  const FitResult& best() const { return best_; }

 private:
  FitResult best_;
};

// Levenberg-Marquardt fit of saturation_law to (Omega, m2) points with
// Omega > omega_c; at least 5 points. Converges on a relative parameter
// change of 1e-10.
FitResult fit_saturation(const std::vector<std::pair<double, double>>& points,
                         std::array<double, 3> initial = {0.23, 0.8, 0.1},
                         double omega_c = 1.0);

}  // namespace btc
