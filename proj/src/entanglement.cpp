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

#include "btc/entanglement.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "btc/combinatorics.hpp"
#include "btc/errors.hpp"

namespace btc {

ReducedState reduced_half(const DickeVector& psi) {
  const int n = psi.n_spins();
  const int n_a = n / 2;
  const int n_b = n - n_a;
  // Schmidt coefficient matrix c(k_A, k_B); rho_A = c c^dagger.
  CMatrix c = CMatrix::Zero(n_a + 1, n_b + 1);
  for (int ka = 0; ka <= n_a; ++ka) {
    for (int kb = 0; kb <= n_b; ++kb) {
      const int k = ka + kb;
      c(ka, kb) = psi[k] * std::sqrt(binomial(n_a, ka) * binomial(n_b, kb) / binomial(n, k));
    }
  }
  return {n_a, c * c.adjoint()};
}

double von_neumann_entropy(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho, Eigen::EigenvaluesOnly);
  const RVector& lambda = solver.eigenvalues();
  if (lambda.minCoeff() < -1e-8) {
    throw ComputeError("reduced density matrix is not positive semidefinite");
  }
  double s = 0.0;
  for (double l : lambda) {
    l = std::clamp(l, 0.0, 1.0);
    if (l > 0.0) s -= l * std::log(l);
  }
  return s;
}

double entanglement_entropy(const DickeVector& psi) {
  return von_neumann_entropy(reduced_half(psi).matrix);
}

}  // namespace btc
