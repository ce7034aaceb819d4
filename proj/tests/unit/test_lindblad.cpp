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

#include <btc/errors.hpp>
#include <btc/lindblad.hpp>

#include <cmath>

#include <doctest.h>

#include "helpers.hpp"
#include "oracle.hpp"

using namespace btc;

TEST_CASE("dark state is stationary without drive") {
  const ModelParams p{6, 0.0, 1.0};
  const auto ops = build_collective_ops(p);
  const auto dark = pure_to_density(fully_polarized(6, Direction::Down));
  CHECK(lindblad_rhs(dark, ops, p).norm() == 0.0);
}

TEST_CASE("generator is traceless, Hermitian and matches the dense and qubit-space forms") {
  btc::Rng rng(4);
  for (int n : {1, 2, 3, 4, 9}) {
    const ModelParams p{n, 1.7, 0.8};
    const auto ops = build_collective_ops(p);
    for (int trial = 0; trial < 3; ++trial) {
      const auto rho = testing::random_density(n, 1 + trial, rng);
      const CMatrix d = lindblad_rhs(rho, ops, p);
      CHECK(std::abs(d.trace()) < 1e-12);
      CHECK((d - d.adjoint()).norm() < 1e-12);
      CHECK((d - lindblad_rhs_dense(rho, ops, p)).norm() < 1e-12);
      if (n <= 4) {
        const CMatrix v = oracle::dicke_embedding(n);
        const CMatrix full = oracle::lindblad_rhs_full(v * rho.matrix() * v.adjoint(), n, p.omega0, p.kappa);
        CHECK((v.adjoint() * full * v - d).norm() < 1e-12);
        // The generator keeps the symmetric sector closed.
        CHECK((v * v.adjoint() * full * v * v.adjoint() - full).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("single spin decays at rate 2 kappa") {
  const double kappa = 1.0;
  LindbladRun run{{1, 0.0, kappa}, 1e-3, 2.0, 100};
  const auto snaps = evolve_lindblad(run, pure_to_density(fully_polarized(1, Direction::Up)));
  const auto ops = build_collective_ops(run.params);
  for (const auto& s : snaps) {
    const double mz = magnetization(s.state, ops).z;
    CHECK(mz == doctest::Approx(2.0 * std::exp(-2.0 * kappa * s.t) - 1.0).epsilon(1e-10));
  }
  const auto d = lindblad_rhs(pure_to_density(fully_polarized(1, Direction::Up)), ops, run.params);
  // d<sigma_z>/dt = -4 kappa p_up at p_up = 1 (rate 2 kappa on the population).
  CHECK((d(1, 1) - d(0, 0)).real() == doctest::Approx(-4.0 * kappa));
}

TEST_CASE("sampling grid") {
  LindbladRun run{{3, 1.0, 1.0}, 0.01, 1.03, 10};
  const auto snaps = evolve_lindblad(run, pure_to_density(fully_polarized(3, Direction::Up)));
  REQUIRE(snaps.size() == 12);
  CHECK(snaps.front().t == 0.0);
  for (std::size_t i = 1; i < snaps.size(); ++i) CHECK(snaps[i].t > snaps[i - 1].t);
  CHECK(snaps.back().t == doctest::Approx(1.03));
  CHECK_THROWS_AS((LindbladRun{{3, 1.0, 1.0}, 0.0, 1.0, 10}.validate()), InvalidArgument);
  CHECK_THROWS_AS((LindbladRun{{3, 1.0, 1.0}, 0.1, 0.01, 10}.validate()), InvalidArgument);
}

TEST_CASE("raw RK4 trace drift stays below 1e-8 per unit time") {
  const ModelParams p{20, 2.0, 1.0};
  const auto ops = build_collective_ops(p);
  btc::Rng rng(12);
  CMatrix rho = testing::random_density(20, 3, rng).matrix();
  const double dt = 1e-3;
  for (int s = 0; s < 1000; ++s) {
    const CMatrix k1 = lindblad_rhs(DenseState(rho), ops, p);
    const CMatrix k2 = lindblad_rhs(DenseState(rho + 0.5 * dt * k1), ops, p);
    const CMatrix k3 = lindblad_rhs(DenseState(rho + 0.5 * dt * k2), ops, p);
    const CMatrix k4 = lindblad_rhs(DenseState(rho + dt * k3), ops, p);
    rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  CHECK(std::abs(rho.trace() - 1.0) < 1e-8);
  CHECK((rho - rho.adjoint()).norm() < 1e-10);
}

TEST_CASE("stepper keeps the state valid") {
  const ModelParams p{12, 2.0, 1.0};
  LindbladStepper stepper(p, 1e-3);
  btc::Rng rng(13);
  auto rho = testing::random_density(12, 2, rng);
  for (int s = 0; s < 2000; ++s) stepper.step(rho);
  CHECK(std::abs(rho.matrix().trace() - 1.0) < 1e-12);
  CHECK((rho.matrix() - rho.matrix().adjoint()).norm() == 0.0);
  CHECK_NOTHROW(validate_density(rho));
}

TEST_CASE("an unstable step size is reported") {
  const ModelParams p{40, 2.0, 1.0};
  LindbladStepper stepper(p, 5.0);
  auto rho = pure_to_density(fully_polarized(40, Direction::Up));
  auto run = [&] {
    for (int s = 0; s < 200; ++s) stepper.step(rho);
  };
  CHECK_THROWS_AS(run(), StepSizeError);
}

TEST_CASE("no drive: relaxation to the dark state") {
  LindbladRun run{{6, 0.0, 1.0}, 1e-3, 40.0, 1000};
  const auto ss = steady_state(run, pure_to_density(fully_polarized(6, Direction::Up)));
  CHECK(ss.converged);
  const auto ops = build_collective_ops(run.params);
  CHECK(magnetization(ss.state, ops).z == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(purity(ss.state) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("magnetized phase at N = 40 approaches the lower fixed point") {
  LindbladRun run{{40, 0.5, 1.0}, 2e-3, 200.0, 1000};
  const auto ss = steady_state(run, pure_to_density(fully_polarized(40, Direction::Up)));
  CHECK(ss.converged);
  const auto ops = build_collective_ops(run.params);
  CHECK(magnetization(ss.state, ops).z == doctest::Approx(-std::sqrt(0.75)).epsilon(0.02));
}

TEST_CASE("steady states at N = 20: pure below the transition, mixed above") {
  const auto up = pure_to_density(fully_polarized(20, Direction::Up));
  LindbladRun low{{20, 0.5, 1.0}, 2e-3, 200.0, 1000};
  const auto a = steady_state(low, up);
  CHECK(a.converged);
  CHECK(purity(a.state) > 0.98);
  LindbladRun high{{20, 2.0, 1.0}, 2e-3, 400.0, 1000};
  const auto b = steady_state(high, up);
  CHECK(b.converged);
  CHECK(purity(b.state) < 0.9);
}

TEST_CASE("steady state does not depend on the initial state") {
  btc::Rng rng(21);
  for (double omega : {0.5, 2.0}) {
    LindbladRun run{{10, omega, 1.0}, 2e-3, 600.0, 1000};
    const auto a = steady_state(run, pure_to_density(testing::random_dicke(10, rng)), 1.0, 1e-10);
    const auto b = steady_state(run, pure_to_density(testing::random_dicke(10, rng)), 1.0, 1e-10);
    CHECK(a.converged);
    CHECK(b.converged);
    CHECK(trace_distance(a.state.matrix(), b.state.matrix()) < 1e-6);
  }
}

TEST_CASE("non-convergence is a flag, not an error") {
  LindbladRun run{{10, 2.0, 1.0}, 1e-3, 1.0, 100};
  const auto ss = steady_state(run, pure_to_density(fully_polarized(10, Direction::Up)));
  CHECK_FALSE(ss.converged);
  CHECK(ss.t == doctest::Approx(1.0));
}
