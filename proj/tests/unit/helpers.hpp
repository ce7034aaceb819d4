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

#include <btc/collective.hpp>
#include <btc/rng.hpp>

namespace testing {

inline btc::CVector random_complex(int dim, btc::Rng& rng) {
  btc::CVector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = btc::Complex(rng.normal(), rng.normal());
  return v;
}

inline btc::DickeVector random_dicke(int n, btc::Rng& rng) {
  btc::DickeVector psi(random_complex(n + 1, rng));
  psi.normalize();
  return psi;
}

// Random density matrix of the given rank (Wishart-like).
inline btc::DenseState random_density(int n, int rank, btc::Rng& rng) {
  btc::CMatrix g(n + 1, rank);
  for (int c = 0; c < rank; ++c) g.col(c) = random_complex(n + 1, rng);
  btc::CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return btc::DenseState(rho);
}

}  // namespace testing
