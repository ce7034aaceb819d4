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

// Pure-state unravelings of the collective decay master equation.
//
// Quantum jump (photodetection), the general shifted unraveling
// L -> L + mu, H -> H - (i/2)(mu* L - mu L^dagger), and quantum state
// diffusion (heterodyne). All updates are first order in dt, followed by
// an explicit renormalization.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "btc/collective.hpp"
#include "btc/rng.hpp"
#include "btc/stabilizer.hpp"

namespace btc {

enum class UnravelingKind { QuantumJump, GeneralMu, QuantumStateDiffusion };

struct Unraveling {
  UnravelingKind kind = UnravelingKind::QuantumJump;
  Complex mu = 0.0;  // GeneralMu only

  static Unraveling quantum_jump() { return {UnravelingKind::QuantumJump, 0.0}; }
  static Unraveling general_mu(Complex mu) { return {UnravelingKind::GeneralMu, mu}; }
  static Unraveling qsd() { return {UnravelingKind::QuantumStateDiffusion, 0.0}; }

  // "qj", "mu=<re>[,<im>]", "qsd"
  std::string label() const;
  bool is_jump_type() const { return kind != UnravelingKind::QuantumStateDiffusion; }
};

// Parses "qj", "qsd", "mu" (with mu_default) or "mu=2", "mu=2,0.5".
Unraveling parse_unraveling(const std::string& text, Complex mu_default = 2.0);

struct UnravelingSpec {
  Unraveling unraveling;
  double dt = 1e-3;
  double t_max = 10.0;
  std::uint64_t seed = 1;
  int n_traj = 1;
  int sample_stride = 100;  // steps between recorded samples

  void validate() const;
  long n_steps() const;
};

struct ObservableSet {
  bool magnetization = true;
  bool sre = false;
  bool entanglement = false;
  bool store_states = false;
};

struct TrajectoryRecord {
  int traj_index = 0;
  std::vector<double> times;
  std::vector<double> m_x, m_y, m_z;
  std::vector<double> sre_density;
  std::vector<double> entanglement;
  std::vector<DickeVector> states;  // only with ObservableSet::store_states
  long jump_count = 0;              // jump-type unravelings only
};

// Stepping kernels for one set of model parameters, with scratch buffers.
// Not thread-safe; make one per worker.
class TrajectoryStepper {
 public:
  explicit TrajectoryStepper(const ModelParams& params);

  const CollectiveOps& ops() const { return ops_; }
  const ModelParams& params() const { return params_; }

  // dp = <psi| (L + mu)^dagger (L + mu) |psi> dt.
  double jump_probability(const DickeVector& psi, Complex mu, double dt);

  // One jump-type step. Returns true if a jump occurred. Throws
  // StepSizeError if dp >= 0.1 (no random number is consumed in that
  // case) and ComputeError if a jump is drawn on a state with L'psi = 0.
  bool jump_step(DickeVector& psi, Complex mu, double dt, Rng& rng);

  // Euler-Maruyama step with dW = sqrt(dt/2) (x + i y).
  void qsd_step(DickeVector& psi, double dt, double x, double y);
  void qsd_step(DickeVector& psi, double dt, Rng& rng);

  // Advances by dt with the given unraveling, halving the step while the
  // jump probability is >= 0.1. Returns the number of jumps.
  int advance(DickeVector& psi, const Unraveling& u, double dt, Rng& rng);

 private:
  void apply_shifted_jump(const CVector& in, Complex mu, CVector& out);
  int advance_jump(DickeVector& psi, Complex mu, double dt, Rng& rng, int depth);

  ModelParams params_;
  CollectiveOps ops_;
  double c_;  // sqrt(kappa / S)
  CVector lpsi_, sx_, ll_, delta_;
};

bool qj_step(DickeVector& psi, const ModelParams& params, double dt, Rng& rng);
bool general_mu_step(DickeVector& psi, const ModelParams& params, Complex mu, double dt,
                     Rng& rng);
void qsd_step(DickeVector& psi, const ModelParams& params, double dt, Rng& rng);

// Runs trajectory `index` with the RNG stream (spec.seed, index).
TrajectoryRecord run_trajectory(const UnravelingSpec& spec, const ModelParams& params,
                                const DickeVector& psi0, const ObservableSet& observables,
                                int index);

// Runs spec.n_traj trajectories in parallel; output is ordered by index and
// independent of the worker count. Errors carry the trajectory index.
std::vector<TrajectoryRecord> run_ensemble(const UnravelingSpec& spec, const ModelParams& params,
                                           const DickeVector& psi0,
                                           const ObservableSet& observables, int workers = 0);

}  // namespace btc
