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

#pragma once

#include "btc/collective.hpp"

namespace btc {

// Reduced state of the first N_A = floor(N/2) spins, in the Dicke basis of
// the subsystem (k_A = 0..N_A up spins).
struct ReducedState {
  int n_a = 0;
  CMatrix matrix;
};

// Uses |N; k> = sum_{k_A} sqrt(C(N_A, k_A) C(N_B, k - k_A) / C(N, k))
//               |N_A; k_A> |N_B; k - k_A>.
// For odd N the split is N_A = (N - 1) / 2, N_B = N - N_A.
ReducedState reduced_half(const DickeVector& psi);

// -sum lambda log lambda over the reduced spectrum, 0 log 0 := 0. Throws
// ComputeError if an eigenvalue is below -1e-8.
double entanglement_entropy(const DickeVector& psi);

double von_neumann_entropy(const CMatrix& rho);

}  // namespace btc
