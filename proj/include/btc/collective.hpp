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

// Collective-spin states and operators in the maximal-spin (Dicke) sector.
//
// Index convention shared by the whole library: basis index k = 0..N is
// the number of up spins, i.e. |S, m = k - S> with S = N/2. Index 0 is the
// all-down (dark) state, index N the fully polarized up state.

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace btc {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

struct ModelParams {
  int n_spins = 1;
  double omega0 = 0.0;  // drive frequency, in units of kappa when kappa = 1
  double kappa = 1.0;   // collective decay rate; sets the time unit

  // Dimensionless drive Omega = omega0 / kappa.
  double omega() const { return omega0 / kappa; }
  // Total spin S = N/2.
  double spin() const { return 0.5 * n_spins; }
  int dim() const { return n_spins + 1; }

  // Throws InvalidArgument unless N >= 1, kappa > 0, omega0 >= 0.
  void validate() const;
};

// Mean-field magnetization (<Sx>, <Sy>, <Sz>) / S.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm2() const { return x * x + y * y + z * z; }
  double norm() const;
};

// Pure state of N spins in the maximal-spin sector: N + 1 amplitudes.
class DickeVector {
 public:
  DickeVector() = default;
  explicit DickeVector(CVector amplitudes);

  // Zero vector for N spins (not normalized; a starting buffer).
  static DickeVector zeros(int n_spins);

  int n_spins() const { return static_cast<int>(amp_.size()) - 1; }
  int dim() const { return static_cast<int>(amp_.size()); }

  const CVector& amplitudes() const { return amp_; }
  CVector& amplitudes() { return amp_; }
  Complex operator[](int k) const { return amp_[k]; }

  double norm() const { return amp_.norm(); }
  // Rescales to unit norm; throws ComputeError on a zero or non-finite
  // vector.
  void normalize();

 private:
  CVector amp_;
};

// (N+1)x(N+1) density matrix in the Dicke basis.
class DenseState {
 public:
  DenseState() = default;
  explicit DenseState(CMatrix matrix);

  int n_spins() const { return static_cast<int>(rho_.rows()) - 1; }
  int dim() const { return static_cast<int>(rho_.rows()); }

  const CMatrix& matrix() const { return rho_; }
  CMatrix& matrix() { return rho_; }

  // rho <- (rho + rho^dagger) / 2, then divide by the (real) trace.
  void symmetrize_and_normalize();

 private:
  CMatrix rho_;
};

// Collective spin operators for one N. Dense matrices are provided for
// clarity and tests; the hot loops use the tridiagonal ladder coefficients
// through the apply_* helpers.
struct CollectiveOps {
  int n_spins = 0;
  double spin = 0.0;
  double kappa = 1.0;

  CMatrix sx, sy, sz, s_plus, s_minus;
  CMatrix jump;  // L = sqrt(kappa / S) S_-

  // ladder[k] = <k-1| S_- |k> = sqrt(k (N - k + 1)), ladder[0] = 0.
  RVector ladder;
  // sz_diag[k] = k - S.
  RVector sz_diag;

  int dim() const { return n_spins + 1; }
  double jump_scale() const;  // sqrt(kappa / S)

  // out = S_- in
  void apply_lowering(const CVector& in, CVector& out) const;
  // out = S_+ in
  void apply_raising(const CVector& in, CVector& out) const;
  // out = Sx in
  void apply_sx(const CVector& in, CVector& out) const;
  // out = S_+ S_- in (diagonal, entries ladder[k]^2)
  void apply_raise_lower(const CVector& in, CVector& out) const;
};

CollectiveOps build_collective_ops(const ModelParams& params);

enum class Direction { Up, Down };

DickeVector fully_polarized(int n_spins, Direction direction);

// Product state |phi>^{(x)N} with the single-spin Bloch vector
// (sin t cos p, sin t sin p, cos t), projected onto the Dicke basis (the
// projection is exact: symmetric product states live in the sector).
DickeVector spin_coherent(int n_spins, double theta, double phi);

DenseState pure_to_density(const DickeVector& psi);

// (<Sx>, <Sy>, <Sz>) / S. Throws InvalidArgument if the state's norm
// (trace) deviates from 1 by more than 1e-6.
BlochVector magnetization(const DickeVector& psi, const CollectiveOps& ops);
BlochVector magnetization(const DenseState& rho, const CollectiveOps& ops);

// Tr(rho^2).
double purity(const DenseState& rho);

// Half the trace norm of (a - b).
double trace_distance(const CMatrix& a, const CMatrix& b);

// Checks Hermiticity, unit trace and eigenvalues >= -1e-8; throws
// InvalidArgument naming the violated invariant.
void validate_density(const DenseState& rho, double tol = 1e-10);

}  // namespace btc
