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

#include "btc/stabilizer.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "btc/errors.hpp"

namespace btc {

namespace {

constexpr double kImagTolerance = 1e-8;
constexpr double kSumFloor = 1e-300;

// Column j of the result holds the coefficients of
// (1 + s1 t)^j (1 + s2 t)^{n - j}, s1, s2 in {+1, -1}.
Eigen::MatrixXd mixed_binomial_table(int n, int s1, int s2) {
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int j = 0; j <= n; ++j) {
    for (int e = 0; e <= n; ++e) {
      // [t^e] = sum_b C(j, e - b) s1^{e-b} C(n - j, b) s2^b
      double acc = 0.0;
      for (int b = std::max(0, e - j); b <= std::min(e, n - j); ++b) {
        const int sign = ((s1 < 0 && (e - b) % 2) != (s2 < 0 && b % 2)) ? -1 : 1;
        acc += sign * binomial(j, e - b) * binomial(n - j, b);
      }
      table(e, j) = acc;
    }
  }
  return table;
}

// (-i)^ny * (-1)^nz * v
Complex apply_phase(Complex v, int ny, int nz) {
  switch (ny % 4) {
    case 1: v = Complex(v.imag(), -v.real()); break;
    case 2: v = -v; break;
    case 3: v = Complex(-v.imag(), v.real()); break;
    default: break;
  }
  return (nz % 2) ? -v : v;
}

double checked_real(Complex v, const PauliClass& cls) {
  if (std::abs(v.imag()) > kImagTolerance) {
    throw ComputeError("Pauli class (" + std::to_string(cls.nx) + "," + std::to_string(cls.ny) +
                       "," + std::to_string(cls.nz) + ") expectation has imaginary part " +
                       std::to_string(v.imag()));
  }
  return v.real();
}

}  // namespace

std::vector<PauliClass> enumerate_pauli_classes(int n_spins) {
  if (n_spins < 1) throw InvalidArgument("n_spins must be >= 1");
  std::vector<PauliClass> out;
  out.reserve(static_cast<std::size_t>(binomial(n_spins + 3, 3)));
  for (int nf = 0; nf <= n_spins; ++nf) {
    for (int nz = 0; nz <= n_spins - nf; ++nz) {
      for (int nx = 0; nx <= nf; ++nx) {
        PauliClass c;
        c.nx = nx;
        c.ny = nf - nx;
        c.nz = nz;
        c.nid = n_spins - nf - nz;
        c.multiplicity = multinomial_exact(n_spins, c.nx, c.ny, c.nz);
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

PauliClassTable::PauliClassTable(int n_spins)
    : n_(n_spins), classes_(enumerate_pauli_classes(n_spins)) {
  weight_.reserve(classes_.size());
  for (const auto& c : classes_) {
    weight_.push_back(std::ldexp(c.multiplicity.convert_to<double>(), -n_));
  }
  inv_sqrt_binom_.resize(n_ + 1);
  for (int k = 0; k <= n_; ++k) inv_sqrt_binom_[k] = 1.0 / std::sqrt(binomial(n_, k));
  flip_.reserve(n_ + 1);
  diag_.reserve(n_ + 1);
  for (int m = 0; m <= n_; ++m) {
    flip_.push_back(mixed_binomial_table(m, +1, -1));
    diag_.push_back(mixed_binomial_table(m, -1, +1));
  }
}

template <typename MatrixElement>
std::vector<double> PauliClassTable::all_expectations(const MatrixElement& element) const {
  std::vector<double> out(classes_.size());
  std::size_t idx = 0;
  Eigen::MatrixXd w_re, w_im;
  for (int nf = 0; nf <= n_; ++nf) {
    const int ng = n_ - nf;
    w_re.resize(nf + 1, ng + 1);
    w_im.resize(nf + 1, ng + 1);
    for (int f = 0; f <= ng; ++f) {
      for (int e = 0; e <= nf; ++e) {
        const int k = e + f;
        const int k2 = nf - e + f;
        const Complex w = element(k, k2) * (inv_sqrt_binom_[k] * inv_sqrt_binom_[k2]);
        w_re(e, f) = w.real();
        w_im(e, f) = w.imag();
      }
    }
    // V(n_x, n_z) = sum_{e,f} A(e) W(e, f) B(f), phases applied below.
    const Eigen::MatrixXd v_re = flip_[nf].transpose() * (w_re * diag_[ng]);
    const Eigen::MatrixXd v_im = flip_[nf].transpose() * (w_im * diag_[ng]);
    for (int nz = 0; nz <= ng; ++nz) {
      for (int nx = 0; nx <= nf; ++nx) {
        const PauliClass& cls = classes_[idx];
        const Complex v = apply_phase(Complex(v_re(nx, nz), v_im(nx, nz)), nf - nx, nz);
        out[idx++] = checked_real(v, cls);
      }
    }
  }
  return out;
}

template <typename MatrixElement>
double PauliClassTable::single_expectation(const MatrixElement& element,
                                           const PauliClass& cls) const {
  const int nf = cls.nx + cls.ny;
  const int ng = cls.nz + cls.nid;
  if (nf + ng != n_ || cls.nx < 0 || cls.ny < 0 || cls.nz < 0 || cls.nid < 0) {
    throw InvalidArgument("Pauli class does not match the table's N");
  }
  Complex acc = 0.0;
  for (int e = 0; e <= nf; ++e) {
    const double a = flip_[nf](e, cls.nx);
    if (a == 0.0) continue;
    for (int f = 0; f <= ng; ++f) {
      const int k = e + f;
      const int k2 = nf - e + f;
      acc += a * diag_[ng](f, cls.nz) * element(k, k2) *
             (inv_sqrt_binom_[k] * inv_sqrt_binom_[k2]);
    }
  }
  return checked_real(apply_phase(acc, cls.ny, cls.nz), cls);
}

double PauliClassTable::expectation(const DenseState& rho, const PauliClass& cls) const {
  if (rho.n_spins() != n_) throw InvalidArgument("state size does not match the table");
  const CMatrix& r = rho.matrix();
  return single_expectation([&r](int k, int k2) { return r(k, k2); }, cls);
}

double PauliClassTable::expectation(const DickeVector& psi, const PauliClass& cls) const {
  if (psi.n_spins() != n_) throw InvalidArgument("state size does not match the table");
  const CVector& a = psi.amplitudes();
  return single_expectation([&a](int k, int k2) { return a[k] * std::conj(a[k2]); }, cls);
}

std::vector<double> PauliClassTable::expectations(const DenseState& rho) const {
  if (rho.n_spins() != n_) throw InvalidArgument("state size does not match the table");
  const CMatrix& r = rho.matrix();
  return all_expectations([&r](int k, int k2) { return r(k, k2); });
}

std::vector<double> PauliClassTable::expectations(const DickeVector& psi) const {
  if (psi.n_spins() != n_) throw InvalidArgument("state size does not match the table");
  const CVector& a = psi.amplitudes();
  return all_expectations([&a](int k, int k2) { return a[k] * std::conj(a[k2]); });
}

MagicValue PauliClassTable::finish(const std::vector<double>& expect, double purity_value,
                                   bool pure) const {
  CompensatedSum sum;
  for (std::size_t i = 0; i < expect.size(); ++i) {
    const double p2 = expect[i] * expect[i];
    sum.add(weight_[i] * (p2 * p2));
  }
  MagicValue out;
  double s = sum.value();
  if (!(s > 0.0)) {
    s = kSumFloor;
    out.floored = true;
  }
  if (!pure) {
    if (!(purity_value > 0.0)) {
      throw ComputeError("purity must be positive to evaluate the mixed-state SRE");
    }
    out.purity_term = std::log(purity_value);
  }
  out.m2_total = -std::log(s) + out.purity_term;
  out.m2_density = out.m2_total / n_;
  return out;
}

MagicValue PauliClassTable::sre(const DenseState& rho) const {
  return finish(expectations(rho), purity(rho), false);
}

MagicValue PauliClassTable::sre(const DickeVector& psi) const {
  return finish(expectations(psi), 1.0, true);
}

std::shared_ptr<const PauliClassTable> pauli_class_table(int n_spins) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const PauliClassTable>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n_spins);
  if (it != cache.end()) return it->second;
  auto table = std::make_shared<const PauliClassTable>(n_spins);
  cache.emplace(n_spins, table);
  return table;
}

double class_expectation(const DenseState& rho, const PauliClass& cls, int n_spins) {
  if (rho.n_spins() != n_spins) throw InvalidArgument("state size does not match n_spins");
  return pauli_class_table(n_spins)->expectation(rho, cls);
}

MagicValue sre(const DenseState& rho) { return pauli_class_table(rho.n_spins())->sre(rho); }

MagicValue sre(const DickeVector& psi) { return pauli_class_table(psi.n_spins())->sre(psi); }

}  // namespace btc
