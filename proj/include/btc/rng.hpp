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

// Reproducible random streams.
//
// Generator: std::mt19937_64 (its output sequence is fixed by the C++
// standard). Stream i of master seed s is seeded with
//   splitmix64(s ^ splitmix64(i + 0x9E3779B97F4A7C15)).
// Uniforms take the top 53 bits of one draw; normals use the Box-Muller
// transform on two uniforms and hand out both values in order. None of the
// implementation-defined <random> distributions are used, so a given
// (seed, index) produces the same bits with any standard library.

#pragma once

#include <cstdint>
#include <random>

namespace btc {

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent substream `index` of `master_seed`.
  static Rng stream(std::uint64_t master_seed, std::uint64_t index);

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1).
  double uniform();
  // Standard normal.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace btc
