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

#include "btc/combinatorics.hpp"

#include <algorithm>

#include "btc/errors.hpp"

namespace btc {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r < 9.0e15 ? std::round(r) : r;
}

BigInt binomial_exact(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;  // exact: r is C(n-k+i, i) after this line
  }
  return r;
}

BigInt multinomial_exact(int n, int a, int b, int c) {
  if (a < 0 || b < 0 || c < 0 || a + b + c > n) {
    throw InvalidArgument("multinomial counts out of range");
  }
  return binomial_exact(n, a) * binomial_exact(n - a, b) * binomial_exact(n - a - b, c);
}

}  // namespace btc
