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

#include "btc/trajectory.hpp"

#include <cmath>
#include <sstream>

#include "btc/entanglement.hpp"
#include "btc/errors.hpp"
#include "btc/parallel.hpp"

namespace btc {

namespace {

constexpr double kMaxJumpProbability = 0.1;
constexpr int kMaxHalvings = 30;
const Complex kI(0.0, 1.0);

}  // namespace

std::string Unraveling::label() const {
  switch (kind) {
    case UnravelingKind::QuantumJump: return "qj";
    case UnravelingKind::QuantumStateDiffusion: return "qsd";
    case UnravelingKind::GeneralMu: {
      std::ostringstream os;
      os << "mu=" << mu.real();
      if (mu.imag() != 0.0) os << "," << mu.imag();
      return os.str();
    }
  }
  return "unknown";
}

Unraveling parse_unraveling(const std::string& text, Complex mu_default) {
  if (text == "qj") return Unraveling::quantum_jump();
  if (text == "qsd") return Unraveling::qsd();
  if (text == "mu") return Unraveling::general_mu(mu_default);
  if (text.rfind("mu=", 0) == 0) {
    const std::string body = text.substr(3);
    try {
      const auto comma = body.find(',');
      if (comma == std::string::npos) return Unraveling::general_mu(std::stod(body));
      return Unraveling::general_mu(
          Complex(std::stod(body.substr(0, comma)), std::stod(body.substr(comma + 1))));
    } catch (const std::exception&) {
      // reported below
    }
  }
  throw InvalidArgument("unknown unraveling '" + text + "' (expected qj, qsd, mu, mu=<re>[,<im>])");
}

void UnravelingSpec::validate() const {
  if (!(dt > 0.0)) throw InvalidArgument("trajectory dt must be > 0");
  if (!(t_max >= dt)) throw InvalidArgument("trajectory t_max must be >= dt");
  if (n_traj < 1) throw InvalidArgument("n_traj must be >= 1");
  if (sample_stride < 1) throw InvalidArgument("sample_stride must be >= 1");
}

long UnravelingSpec::n_steps() const { return std::lround(t_max / dt); }

TrajectoryStepper::TrajectoryStepper(const ModelParams& params)
    : params_(params), ops_(build_collective_ops(params)), c_(ops_.jump_scale()) {}

void TrajectoryStepper::apply_shifted_jump(const CVector& in, Complex mu, CVector& out) {
  ops_.apply_lowering(in, out);
  out *= c_;
  if (mu != 0.0) out += mu * in;
}

double TrajectoryStepper::jump_probability(const DickeVector& psi, Complex mu, double dt) {
  apply_shifted_jump(psi.amplitudes(), mu, lpsi_);
  return lpsi_.squaredNorm() * dt;
}

bool TrajectoryStepper::jump_step(DickeVector& psi, Complex mu, double dt, Rng& rng) {
  CVector& a = psi.amplitudes();
  // lpsi_ = (L + mu) psi
  apply_shifted_jump(a, mu, lpsi_);
  const double rate = lpsi_.squaredNorm();
  const double dp = rate * dt;
  if (dp >= kMaxJumpProbability) {
    throw StepSizeError("jump probability " + std::to_string(dp) + " >= 0.1; reduce dt", dp);
  }
  if (rng.uniform() < dp) {
    if (!(rate > 0.0)) throw ComputeError("jump drawn on a state annihilated by the jump operator");
    a = lpsi_ / std::sqrt(rate);
    return true;
  }
  // No-click evolution under H - (i/2)(L^dag L + 2 mu* L + |mu|^2):
  // delta = -i w0 Sx psi - 1/2 (L^dag L psi + 2 mu* L psi + |mu|^2 psi).
  ops_.apply_sx(a, sx_);
  ops_.apply_raise_lower(a, ll_);
  delta_ = (-kI * params_.omega0) * sx_ - (0.5 * c_ * c_) * ll_;
  if (mu != 0.0) {
    ops_.apply_lowering(a, lpsi_);
    delta_ -= (std::conj(mu) * c_) * lpsi_ + (0.5 * std::norm(mu)) * a;
  }
  a += dt * delta_ + (0.5 * dp) * a;
  psi.normalize();
  return false;
}

void TrajectoryStepper::qsd_step(DickeVector& psi, double dt, double x, double y) {
  CVector& a = psi.amplitudes();
  ops_.apply_lowering(a, lpsi_);
  lpsi_ *= c_;  // L psi
  const Complex ell = a.dot(lpsi_);  // <psi|L|psi>
  const Complex dw = std::sqrt(0.5 * dt) * Complex(x, y);
  ops_.apply_sx(a, sx_);
  ops_.apply_raise_lower(a, ll_);
  // [-i H - 1/2 (L^dag L + |l|^2 - 2 l* L)] dt + (L - l) dW
  delta_ = ((-kI * params_.omega0) * dt) * sx_ - (0.5 * c_ * c_ * dt) * ll_ -
           (0.5 * std::norm(ell) * dt) * a + (std::conj(ell) * dt) * lpsi_ + dw * lpsi_ -
           (ell * dw) * a;
  a += delta_;
  psi.normalize();
}

void TrajectoryStepper::qsd_step(DickeVector& psi, double dt, Rng& rng) {
  const double x = rng.normal();
  const double y = rng.normal();
  qsd_step(psi, dt, x, y);
}

int TrajectoryStepper::advance(DickeVector& psi, const Unraveling& u, double dt, Rng& rng) {
  if (u.kind == UnravelingKind::QuantumStateDiffusion) {
    qsd_step(psi, dt, rng);
    return 0;
  }
  const Complex mu = u.kind == UnravelingKind::GeneralMu ? u.mu : Complex(0.0);
  return advance_jump(psi, mu, dt, rng, 0);
}

int TrajectoryStepper::advance_jump(DickeVector& psi, Complex mu, double dt, Rng& rng,
                                    int depth) {
  // The probability check precedes the random draw, so splitting the step
  // consumes no extra randomness.
  if (jump_probability(psi, mu, dt) >= kMaxJumpProbability) {
    if (depth >= kMaxHalvings) {
      throw StepSizeError("jump probability stays >= 0.1 after repeated step halving", dt);
    }
    const int first = advance_jump(psi, mu, 0.5 * dt, rng, depth + 1);
    return first + advance_jump(psi, mu, 0.5 * dt, rng, depth + 1);
  }
  return jump_step(psi, mu, dt, rng) ? 1 : 0;
}

bool qj_step(DickeVector& psi, const ModelParams& params, double dt, Rng& rng) {
  TrajectoryStepper stepper(params);
  return stepper.jump_step(psi, 0.0, dt, rng);
}

bool general_mu_step(DickeVector& psi, const ModelParams& params, Complex mu, double dt,
                     Rng& rng) {
  TrajectoryStepper stepper(params);
  return stepper.jump_step(psi, mu, dt, rng);
}

void qsd_step(DickeVector& psi, const ModelParams& params, double dt, Rng& rng) {
  TrajectoryStepper stepper(params);
  stepper.qsd_step(psi, dt, rng);
}

namespace {

void record_sample(TrajectoryRecord& rec, double t, const DickeVector& psi,
                   const ObservableSet& obs, const CollectiveOps& ops,
                   const PauliClassTable* table) {
  rec.times.push_back(t);
  if (obs.magnetization) {
    const BlochVector m = magnetization(psi, ops);
    rec.m_x.push_back(m.x);
    rec.m_y.push_back(m.y);
    rec.m_z.push_back(m.z);
  }
  if (obs.sre) rec.sre_density.push_back(table->sre(psi).m2_density);
  if (obs.entanglement) rec.entanglement.push_back(entanglement_entropy(psi));
  if (obs.store_states) rec.states.push_back(psi);
}

}  // namespace

TrajectoryRecord run_trajectory(const UnravelingSpec& spec, const ModelParams& params,
                                const DickeVector& psi0, const ObservableSet& observables,
                                int index) {
  spec.validate();
  params.validate();
  if (psi0.n_spins() != params.n_spins) throw InvalidArgument("initial state has the wrong size");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw InvalidArgument("initial state is not normalized");

  std::shared_ptr<const PauliClassTable> table;
  if (observables.sre) table = pauli_class_table(params.n_spins);

  TrajectoryStepper stepper(params);
  Rng rng = Rng::stream(spec.seed, static_cast<std::uint64_t>(index));
  TrajectoryRecord rec;
  rec.traj_index = index;
  DickeVector psi = psi0;
  const long n_steps = spec.n_steps();
  try {
    record_sample(rec, 0.0, psi, observables, stepper.ops(), table.get());
    for (long s = 1; s <= n_steps; ++s) {
      rec.jump_count += stepper.advance(psi, spec.unraveling, spec.dt, rng);
      if (s % spec.sample_stride == 0 || s == n_steps) {
        record_sample(rec, s * spec.dt, psi, observables, stepper.ops(), table.get());
      }
    }
  } catch (const Error& e) {
    throw ComputeError("trajectory " + std::to_string(index) + ": " + e.what());
  }
  return rec;
}

std::vector<TrajectoryRecord> run_ensemble(const UnravelingSpec& spec, const ModelParams& params,
                                           const DickeVector& psi0,
                                           const ObservableSet& observables, int workers) {
  spec.validate();
  // Build the shared class table once, before the workers start.
  if (observables.sre) pauli_class_table(params.n_spins);
  std::vector<TrajectoryRecord> out(static_cast<std::size_t>(spec.n_traj));
  parallel_for(out.size(), resolve_workers(workers), [&](std::size_t i) {
    out[i] = run_trajectory(spec, params, psi0, observables, static_cast<int>(i));
  });
  return out;
}

}  // namespace btc
