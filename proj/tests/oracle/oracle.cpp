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

#include "oracle.hpp"

#include <bit>
#include <cmath>

namespace oracle {

namespace {

// P|c> = phase |c ^ flip>.
void apply_string(const PauliString& p, unsigned c, unsigned& target, Complex& phase) {
  target = c;
  phase = 1.0;
  for (std::size_t q = 0; q < p.size(); ++q) {
    const bool up = (c >> q) & 1u;
    switch (p[q]) {
      case 1: target ^= 1u << q; break;
      case 2:
        target ^= 1u << q;
        phase *= up ? Complex(0, 1) : Complex(0, -1);
        break;
      case 3:
        if (!up) phase = -phase;
        break;
      default: break;
    }
  }
}

bool next_string(PauliString& p) {
  for (auto& f : p) {
    if (++f < 4) return true;
    f = 0;
  }
  return false;
}

}  // namespace

CMatrix dicke_embedding(int n) {
  const unsigned dim = 1u << n;
  CMatrix v = CMatrix::Zero(dim, n + 1);
  std::vector<int> count(n + 1, 0);
  for (unsigned b = 0; b < dim; ++b) ++count[std::popcount(b)];
  for (unsigned b = 0; b < dim; ++b) {
    const int k = std::popcount(b);
    v(b, k) = 1.0 / std::sqrt(static_cast<double>(count[k]));
  }
  return v;
}

CVector embed_pure(const CVector& dicke) {
  const int n = static_cast<int>(dicke.size()) - 1;
  return dicke_embedding(n) * dicke;
}

CMatrix embed_mixed(const CMatrix& dicke_rho) {
  const int n = static_cast<int>(dicke_rho.rows()) - 1;
  const CMatrix v = dicke_embedding(n);
  return v * dicke_rho * v.adjoint();
}

Complex pauli_expectation(const CVector& full, const PauliString& p) {
  Complex sum = 0.0;
  for (unsigned c = 0; c < full.size(); ++c) {
    unsigned t;
    Complex ph;
    apply_string(p, c, t, ph);
    sum += std::conj(full[t]) * ph * full[c];
  }
  return sum;
}

Complex pauli_trace(const CMatrix& full_rho, const PauliString& p) {
  Complex sum = 0.0;
  for (unsigned c = 0; c < full_rho.rows(); ++c) {
    unsigned t;
    Complex ph;
    apply_string(p, c, t, ph);
    sum += ph * full_rho(c, t);
  }
  return sum;
}

double naive_sre_pure(const CVector& full) {
  const int n = std::countr_zero(static_cast<unsigned>(full.size()));
  PauliString p(n, 0);
  double sum = 0.0;
  do {
    const double e = pauli_expectation(full, p).real();
    sum += e * e * e * e;
  } while (next_string(p));
  return -std::log(sum / std::ldexp(1.0, n));
}

double naive_sre_mixed(const CMatrix& full_rho) {
  const int n = std::countr_zero(static_cast<unsigned>(full_rho.rows()));
  PauliString p(n, 0);
  double sum = 0.0;
  do {
    const double e = pauli_trace(full_rho, p).real();
    sum += e * e * e * e;
  } while (next_string(p));
  const double purity = (full_rho * full_rho).trace().real();
  return -std::log(sum / std::ldexp(1.0, n)) + std::log(purity);
}

Complex class_expectation_bruteforce(const CMatrix& dicke_rho, int nx, int ny, int nz) {
  const int n = static_cast<int>(dicke_rho.rows()) - 1;
  PauliString p(n, 0);
  int q = 0;
  for (int i = 0; i < nx; ++i) p[q++] = 1;
  for (int i = 0; i < ny; ++i) p[q++] = 2;
  for (int i = 0; i < nz; ++i) p[q++] = 3;
  return pauli_trace(embed_mixed(dicke_rho), p);
}

CMatrix collective_full(int n, char axis) {
  const unsigned dim = 1u << n;
  CMatrix s = CMatrix::Zero(dim, dim);
  const int code = axis == 'x' ? 1 : axis == 'y' ? 2 : 3;
  for (int q = 0; q < n; ++q) {
    PauliString p(n, 0);
    p[q] = code;
    for (unsigned c = 0; c < dim; ++c) {
      unsigned t;
      Complex ph;
      apply_string(p, c, t, ph);
      s(t, c) += 0.5 * ph;
    }
  }
  return s;
}

CMatrix lowering_full(int n) {
  const unsigned dim = 1u << n;
  CMatrix s = CMatrix::Zero(dim, dim);
  for (unsigned c = 0; c < dim; ++c) {
    for (int q = 0; q < n; ++q) {
      if ((c >> q) & 1u) s(c ^ (1u << q), c) += 1.0;
    }
  }
  return s;
}

CMatrix lindblad_rhs_full(const CMatrix& rho, int n, double omega0, double kappa) {
  const CMatrix sx = collective_full(n, 'x');
  const CMatrix sm = lowering_full(n);
  const CMatrix sp = sm.adjoint();
  const CMatrix spsm = sp * sm;
  const Complex i(0.0, 1.0);
  const double rate = kappa / (0.5 * n);
  return -i * omega0 * (sx * rho - rho * sx) +
         rate * (sm * rho * sp - 0.5 * (spsm * rho + rho * spsm));
}

double bipartite_entropy_full(const CVector& full, int n_a) {
  const int n = std::countr_zero(static_cast<unsigned>(full.size()));
  const Eigen::Index da = Eigen::Index(1) << n_a;
  const Eigen::Index db = Eigen::Index(1) << (n - n_a);
  // index = a + b * 2^{n_a}: column-major reshape to da x db.
  const CMatrix m = Eigen::Map<const CMatrix>(full.data(), da, db);
  const Eigen::VectorXd s = Eigen::JacobiSVD<CMatrix>(m).singularValues();
  double h = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double p = s[i] * s[i];
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

CVector product_state_full(int n, double theta, double phi) {
  const Complex up = std::cos(0.5 * theta);
  const Complex down = std::polar(std::sin(0.5 * theta), phi);
  const unsigned dim = 1u << n;
  CVector v(dim);
  for (unsigned b = 0; b < dim; ++b) {
    Complex a = 1.0;
    for (int q = 0; q < n; ++q) a *= ((b >> q) & 1u) ? up : down;
    v[b] = a;
  }
  return v;
}

}  // namespace oracle
