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

#include "btc/lindblad.hpp"

#include <cmath>
#include <string>

#include "btc/errors.hpp"

namespace btc {

namespace {

constexpr double kTraceStepTolerance = 1e-6;
const Complex kI(0.0, 1.0);

void banded_rhs(const CMatrix& rho, const RVector& l, const RVector& occ, double omega0,
                double gamma, CMatrix& out) {
  const int d = static_cast<int>(rho.rows());
  out.resize(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      // [Sx, rho]_ij with Sx_{i,i+1} = l[i+1] / 2 and Sx_{i,i-1} = l[i] / 2.
      Complex comm = 0.0;
      if (i + 1 < d) comm += l[i + 1] * rho(i + 1, j);
      if (i > 0) comm += l[i] * rho(i - 1, j);
      if (j + 1 < d) comm -= rho(i, j + 1) * l[j + 1];
      if (j > 0) comm -= rho(i, j - 1) * l[j];
      Complex v = -kI * (0.5 * omega0) * comm;
      // S_- rho S_+ and the anticommutator with the diagonal S_+ S_-.
      Complex jump = (i + 1 < d && j + 1 < d) ? l[i + 1] * l[j + 1] * rho(i + 1, j + 1) : 0.0;
      v += gamma * (jump - 0.5 * (occ[i] + occ[j]) * rho(i, j));
      out(i, j) = v;
    }
  }
}

}  // namespace

void LindbladRun::validate() const {
  params.validate();
  if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
  if (!(t_max >= dt)) throw InvalidArgument("t_max must be >= dt");
  if (sample_stride < 1) throw InvalidArgument("sample_stride must be >= 1");
}

long LindbladRun::n_steps() const { return std::lround(t_max / dt); }

CMatrix lindblad_rhs(const DenseState& rho, const CollectiveOps& ops, const ModelParams& params) {
  if (rho.dim() != ops.dim()) throw InvalidArgument("state and operator sizes differ");
  RVector occ = ops.ladder.cwiseProduct(ops.ladder);
  CMatrix out;
  banded_rhs(rho.matrix(), ops.ladder, occ, params.omega0, params.kappa / params.spin(), out);
  return out;
}

CMatrix lindblad_rhs_dense(const DenseState& rho, const CollectiveOps& ops,
                           const ModelParams& params) {
  const CMatrix& r = rho.matrix();
  const CMatrix h = params.omega0 * ops.sx;
  const CMatrix n = ops.s_plus * ops.s_minus;
  const double gamma = params.kappa / params.spin();
  return -kI * (h * r - r * h) +
         gamma * (ops.s_minus * r * ops.s_plus - 0.5 * (n * r + r * n));
}

LindbladStepper::LindbladStepper(const ModelParams& params, double dt)
    : params_(params), ops_(build_collective_ops(params)), dt_(dt) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
  occupation_ = ops_.ladder.cwiseProduct(ops_.ladder);
}

void LindbladStepper::rhs(const CMatrix& rho, CMatrix& out) const {
  banded_rhs(rho, ops_.ladder, occupation_, params_.omega0, params_.kappa / params_.spin(), out);
}

void LindbladStepper::step(DenseState& state) {
  CMatrix& rho = state.matrix();
  rhs(rho, k1_);
  tmp_ = rho + (0.5 * dt_) * k1_;
  rhs(tmp_, k2_);
  tmp_ = rho + (0.5 * dt_) * k2_;
  rhs(tmp_, k3_);
  tmp_ = rho + dt_ * k3_;
  rhs(tmp_, k4_);
  rho += (dt_ / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  const double drift = std::abs(rho.trace() - 1.0);
  if (!(drift <= kTraceStepTolerance)) {
    throw StepSizeError("Lindblad RK4 step changed the trace by " + std::to_string(drift) +
                            "; reduce dt",
                        drift);
  }
  state.symmetrize_and_normalize();
}

void evolve_lindblad(const LindbladRun& run, const DenseState& rho0,
                     const LindbladObserver& observer) {
  run.validate();
  if (rho0.dim() != run.params.dim()) throw InvalidArgument("initial state has the wrong size");
  LindbladStepper stepper(run.params, run.dt);
  DenseState rho = rho0;
  const long n_steps = run.n_steps();
  observer(0.0, rho);
  for (long s = 1; s <= n_steps; ++s) {
    stepper.step(rho);
    if (s % run.sample_stride == 0 || s == n_steps) observer(s * run.dt, rho);
  }
}

std::vector<LindbladSnapshot> evolve_lindblad(const LindbladRun& run, const DenseState& rho0) {
  std::vector<LindbladSnapshot> out;
  evolve_lindblad(run, rho0, [&out](double t, const DenseState& rho) { out.push_back({t, rho}); });
  return out;
}

SteadyStateResult steady_state(const LindbladRun& run, const DenseState& rho0, double lag,
                               double tolerance) {
  run.validate();
  if (!(lag >= run.dt)) throw InvalidArgument("steady-state lag must be >= dt");
  LindbladStepper stepper(run.params, run.dt);
  const long lag_steps = std::max(1L, std::lround(lag / run.dt));
  const long n_steps = run.n_steps();
  SteadyStateResult result;
  result.state = rho0;
  CMatrix previous = rho0.matrix();
  for (long s = 1; s <= n_steps; ++s) {
    stepper.step(result.state);
    if (s % lag_steps == 0) {
      result.last_distance = trace_distance(result.state.matrix(), previous);
      result.t = s * run.dt;
      if (result.last_distance < tolerance) {
        result.converged = true;
        return result;
      }
      previous = result.state.matrix();
    }
  }
  result.t = n_steps * run.dt;
  return result;
}

}  // namespace btc
