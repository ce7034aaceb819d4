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

// Stabilizer 2-Renyi entropy of permutationally invariant states.
//
// Pauli strings that differ only by a permutation of their factors have the
// same expectation value on a symmetric state, so the 4^N strings collapse
// into C(N+3, 3) classes labelled by the gate counts (n_x, n_y, n_z).
//
// Class expectation in the Dicke basis. Split the sites into the "flip"
// group F (X and Y factors, n_f = n_x + n_y sites) and the "diagonal" group
// G (Z and identity factors, n_g = n_z + n_id sites). For a basis string
// with e up spins in F and f up spins in G the string maps |k = e + f> to
// |k' = n_f - e + f>, and summing the site phases over all strings with the
// same (e, f) gives
//
//   A(e) = (-i)^{n_y} [t^e] (1 + t)^{n_x} (1 - t)^{n_y}
//   B(f) = (-1)^{n_z} [t^f] (1 - t)^{n_z} (1 + t)^{n_id}
//
// (Y|up> = i|down>, Y|down> = -i|up>, Z|down> = -|down>). Therefore
//
//   Tr(P rho) = sum_{e,f} A(e) B(f) rho(e + f, n_f - e + f)
//               / sqrt(C(N, e + f) C(N, n_f - e + f)).
//
// |A(e) B(f)| <= C(n_f, e) C(n_g, f) <= min(C(N, k), C(N, k')), so every
// term is bounded by |rho(k, k')| and the sum is numerically benign.
//
// For fixed n_f the matrix W(e, f) = rho(...) / sqrt(...) is shared by all
// classes; stacking the A and B coefficient vectors as matrices turns the
// whole n_f block into two small matrix products.

#pragma once

#include <memory>
#include <vector>

#include "btc/collective.hpp"
#include "btc/combinatorics.hpp"

namespace btc {

struct PauliClass {
  int nx = 0;
  int ny = 0;
  int nz = 0;
  int nid = 0;
  BigInt multiplicity;  // N! / (nx! ny! nz! nid!)
};

struct MagicValue {
  double m2_total = 0.0;     // natural-log units
  double m2_density = 0.0;   // m2_total / N
  double purity_term = 0.0;  // log Tr(rho^2), 0 for pure input
  bool floored = false;      // the Pauli sum was clamped at 1e-300
};

// All classes for N spins, ordered by (n_x + n_y, n_z, n_x).
std::vector<PauliClass> enumerate_pauli_classes(int n_spins);

// Immutable per-N table: the class list, exact multiplicities and the
// polynomial coefficients used by the fast expectation. Shareable across
// threads.
class PauliClassTable {
 public:
  explicit PauliClassTable(int n_spins);

  int n_spins() const { return n_; }
  const std::vector<PauliClass>& classes() const { return classes_; }

  // Tr(P rho) for a representative string of the class.
  double expectation(const DenseState& rho, const PauliClass& cls) const;
  double expectation(const DickeVector& psi, const PauliClass& cls) const;

  // Expectations of every class, in classes() order.
  std::vector<double> expectations(const DenseState& rho) const;
  std::vector<double> expectations(const DickeVector& psi) const;

  MagicValue sre(const DenseState& rho) const;
  MagicValue sre(const DickeVector& psi) const;

 private:
  // `element(k, k2)` returns rho(k, k2).
  template <typename MatrixElement>
  std::vector<double> all_expectations(const MatrixElement& element) const;
  template <typename MatrixElement>
  double single_expectation(const MatrixElement& element, const PauliClass& cls) const;
  MagicValue finish(const std::vector<double>& expect, double purity_value, bool pure) const;

  int n_;
  std::vector<PauliClass> classes_;
  std::vector<double> weight_;         // g / 2^N, classes() order
  std::vector<double> inv_sqrt_binom_; // 1 / sqrt(C(N, k))
  // flip_[n_f] column n_x holds [t^e] (1+t)^{n_x} (1-t)^{n_f-n_x}.
  std::vector<Eigen::MatrixXd> flip_;
  // diag_[n_g] column n_z holds [t^f] (1-t)^{n_z} (1+t)^{n_g-n_z}.
  std::vector<Eigen::MatrixXd> diag_;
};

// Shared table for N, built on first use.
std::shared_ptr<const PauliClassTable> pauli_class_table(int n_spins);

double class_expectation(const DenseState& rho, const PauliClass& cls, int n_spins);

MagicValue sre(const DenseState& rho);
MagicValue sre(const DickeVector& psi);

}  // namespace btc
