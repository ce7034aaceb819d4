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

#include "btc/collective.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "btc/combinatorics.hpp"
#include "btc/errors.hpp"

namespace btc {

void ModelParams::validate() const {
  if (n_spins < 1) {
    throw InvalidArgument("n_spins must be >= 1, got " + std::to_string(n_spins));
  }
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw InvalidArgument("kappa must be > 0");
  }
  if (!(omega0 >= 0.0) || !std::isfinite(omega0)) {
    throw InvalidArgument("omega0 must be >= 0");
  }
}

double BlochVector::norm() const { return std::sqrt(norm2()); }

DickeVector::DickeVector(CVector amplitudes) : amp_(std::move(amplitudes)) {
  if (amp_.size() < 2) {
    throw InvalidArgument("a Dicke vector needs at least 2 amplitudes (N >= 1)");
  }
}

DickeVector DickeVector::zeros(int n_spins) {
  return DickeVector(CVector::Zero(n_spins + 1));
}

void DickeVector::normalize() {
  const double n = amp_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ComputeError("cannot normalize a zero or non-finite state vector");
  }
  amp_ /= n;
}

DenseState::DenseState(CMatrix matrix) : rho_(std::move(matrix)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 2) {
    throw InvalidArgument("density matrix must be square with dimension >= 2");
  }
}

void DenseState::symmetrize_and_normalize() {
  CMatrix herm = 0.5 * (rho_ + rho_.adjoint());
  const double tr = herm.trace().real();
  if (!(tr > 0.0) || !std::isfinite(tr)) {
    throw ComputeError("density matrix trace is not positive");
  }
  rho_ = herm / tr;
}

double CollectiveOps::jump_scale() const { return std::sqrt(kappa / spin); }

void CollectiveOps::apply_lowering(const CVector& in, CVector& out) const {
  const int d = dim();
  out.resize(d);
  for (int k = 0; k + 1 < d; ++k) out[k] = ladder[k + 1] * in[k + 1];
  out[d - 1] = 0.0;
}

void CollectiveOps::apply_raising(const CVector& in, CVector& out) const {
  const int d = dim();
  out.resize(d);
  out[0] = 0.0;
  for (int k = 1; k < d; ++k) out[k] = ladder[k] * in[k - 1];
}

void CollectiveOps::apply_sx(const CVector& in, CVector& out) const {
  const int d = dim();
  out.resize(d);
  for (int k = 0; k < d; ++k) {
    Complex acc = 0.0;
    if (k + 1 < d) acc += ladder[k + 1] * in[k + 1];
    if (k > 0) acc += ladder[k] * in[k - 1];
    out[k] = 0.5 * acc;
  }
}

void CollectiveOps::apply_raise_lower(const CVector& in, CVector& out) const {
  const int d = dim();
  out.resize(d);
  for (int k = 0; k < d; ++k) out[k] = (ladder[k] * ladder[k]) * in[k];
}

CollectiveOps build_collective_ops(const ModelParams& params) {
  params.validate();
  CollectiveOps ops;
  const int n = params.n_spins;
  const int d = n + 1;
  ops.n_spins = n;
  ops.spin = params.spin();
  ops.kappa = params.kappa;

  ops.ladder = RVector::Zero(d);
  ops.sz_diag = RVector::Zero(d);
  for (int k = 0; k < d; ++k) {
    ops.sz_diag[k] = k - ops.spin;
    // S(S+1) - m(m-1) with m = k - S equals k (N - k + 1).
    if (k > 0) ops.ladder[k] = std::sqrt(static_cast<double>(k) * (n - k + 1));
  }

  ops.s_minus = CMatrix::Zero(d, d);
  for (int k = 1; k < d; ++k) ops.s_minus(k - 1, k) = ops.ladder[k];
  ops.s_plus = ops.s_minus.adjoint();
  ops.sx = 0.5 * (ops.s_plus + ops.s_minus);
  ops.sy = (ops.s_plus - ops.s_minus) / Complex(0.0, 2.0);
  ops.sz = ops.sz_diag.cast<Complex>().asDiagonal();
  ops.jump = ops.jump_scale() * ops.s_minus;
  return ops;
}

DickeVector fully_polarized(int n_spins, Direction direction) {
  if (n_spins < 1) throw InvalidArgument("n_spins must be >= 1");
  DickeVector psi = DickeVector::zeros(n_spins);
  psi.amplitudes()[direction == Direction::Up ? n_spins : 0] = 1.0;
  return psi;
}

DickeVector spin_coherent(int n_spins, double theta, double phi) {
  if (n_spins < 1) throw InvalidArgument("n_spins must be >= 1");
  // Single spin: cos(t/2)|up> + e^{i p} sin(t/2)|down>.
  const Complex up = std::cos(0.5 * theta);
  const Complex down = std::polar(1.0, phi) * std::sin(0.5 * theta);
  DickeVector psi = DickeVector::zeros(n_spins);
  for (int k = 0; k <= n_spins; ++k) {
    Complex term = std::sqrt(binomial(n_spins, k));
    for (int i = 0; i < k; ++i) term *= up;
    for (int i = k; i < n_spins; ++i) term *= down;
    psi.amplitudes()[k] = term;
  }
  psi.normalize();
  return psi;
}

DenseState pure_to_density(const DickeVector& psi) {
  return DenseState(psi.amplitudes() * psi.amplitudes().adjoint());
}

namespace {

void require_normalized(double norm_measure, const char* what) {
  if (std::abs(norm_measure - 1.0) > 1e-6) {
    throw InvalidArgument(std::string(what) + " is not normalized (deviation " +
                          std::to_string(norm_measure - 1.0) + ")");
  }
}

}  // namespace

BlochVector magnetization(const DickeVector& psi, const CollectiveOps& ops) {
  const CVector& a = psi.amplitudes();
  require_normalized(a.squaredNorm(), "state vector");
  // <S_-> = sum_k conj(a[k-1]) ladder[k] a[k].
  Complex s_minus = 0.0;
  double sz = 0.0;
  for (int k = 0; k < psi.dim(); ++k) {
    sz += ops.sz_diag[k] * std::norm(a[k]);
    if (k > 0) s_minus += std::conj(a[k - 1]) * ops.ladder[k] * a[k];
  }
  // S_- = Sx - i Sy, so <Sx> = Re<S_->, <Sy> = -Im<S_->.
  return {s_minus.real() / ops.spin, -s_minus.imag() / ops.spin, sz / ops.spin};
}

BlochVector magnetization(const DenseState& rho, const CollectiveOps& ops) {
  const CMatrix& r = rho.matrix();
  require_normalized(r.trace().real(), "density matrix");
  // <S_-> = Tr(S_- rho) = sum_k ladder[k] rho(k, k-1).
  Complex s_minus = 0.0;
  double sz = 0.0;
  for (int k = 0; k < rho.dim(); ++k) {
    sz += ops.sz_diag[k] * r(k, k).real();
    if (k > 0) s_minus += ops.ladder[k] * r(k, k - 1);
  }
  return {s_minus.real() / ops.spin, -s_minus.imag() / ops.spin, sz / ops.spin};
}

double purity(const DenseState& rho) {
  // Tr(rho^2) = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho.
  return (rho.matrix().cwiseProduct(rho.matrix().transpose())).sum().real();
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  CMatrix diff = a - b;
  diff = 0.5 * (diff + diff.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(diff, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

void validate_density(const DenseState& rho, double tol) {
  const CMatrix& r = rho.matrix();
  const double herm_dev = (r - r.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > tol) {
    throw InvalidArgument("density matrix not Hermitian (deviation " +
                          std::to_string(herm_dev) + ")");
  }
  const Complex tr = r.trace();
  if (std::abs(tr - 1.0) > tol) {
    throw InvalidArgument("density matrix trace deviates from 1");
  }
  CMatrix herm = 0.5 * (r + r.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-8) {
    throw InvalidArgument("density matrix has a negative eigenvalue below -1e-8");
  }
}

}  // namespace btc
