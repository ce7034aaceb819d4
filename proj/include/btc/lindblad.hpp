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

// Unconditional master equation
//
//   d rho / dt = -i w0 [Sx, rho] + (kappa / S) (S_- rho S_+ - 1/2 {S_+ S_-, rho})
//
// integrated with fixed-step classic RK4 in the Dicke basis.

#pragma once

#include <functional>
#include <vector>

#include "btc/collective.hpp"

namespace btc {

struct LindbladRun {
  ModelParams params;
  double dt = 1e-3;        // in units of 1/kappa
  double t_max = 10.0;
  int sample_stride = 100; // steps between recorded snapshots

  void validate() const;
  long n_steps() const;
};

// Right-hand side using the tridiagonal structure of the ladder operators.
CMatrix lindblad_rhs(const DenseState& rho, const CollectiveOps& ops, const ModelParams& params);

// Same generator built from dense matrix products; reference for tests.
CMatrix lindblad_rhs_dense(const DenseState& rho, const CollectiveOps& ops,
                           const ModelParams& params);

// Single fixed-step RK4 propagator with reusable workspace.
class LindbladStepper {
 public:
  LindbladStepper(const ModelParams& params, double dt);

  // Advances rho by one step, re-symmetrizes and renormalizes the trace.
  // Throws StepSizeError if the trace drifted by more than 1e-6 before
  // renormalization.
  void step(DenseState& rho);

  const CollectiveOps& ops() const { return ops_; }

 private:
  void rhs(const CMatrix& rho, CMatrix& out) const;

  ModelParams params_;
  CollectiveOps ops_;
  double dt_;
  RVector occupation_;  // diagonal of S_+ S_-
  CMatrix k1_, k2_, k3_, k4_, tmp_;
};

using LindbladObserver = std::function<void(double t, const DenseState& rho)>;

// Calls observer at t = 0 and every sample_stride steps (and at the final
// step when it does not land on the stride).
void evolve_lindblad(const LindbladRun& run, const DenseState& rho0,
                     const LindbladObserver& observer);

struct LindbladSnapshot {
  double t = 0.0;
  DenseState state;
};

std::vector<LindbladSnapshot> evolve_lindblad(const LindbladRun& run, const DenseState& rho0);

struct SteadyStateResult {
  DenseState state;
  bool converged = false;
  double t = 0.0;              // time reached
  double last_distance = 0.0;  // trace distance of the last lagged pair
};

// Integrates until snapshots `lag` apart are within `tolerance` in trace
// distance, or t_max is reached (converged = false).
SteadyStateResult steady_state(const LindbladRun& run, const DenseState& rho0,
                               double lag = 1.0, double tolerance = 1e-8);

}  // namespace btc
