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

// Small-system ODE integrators: a variable-order (1-5), quasi-constant
// step backward differentiation formula solver in the Nordsieck-like
// backward-difference form (same scheme as the Shampine-Reichelt NDF/BDF
// family), and a fixed-step classic RK4.

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "btc/errors.hpp"

namespace btc {

struct BdfOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  double first_step = 0.0;  // 0 selects it automatically
};

template <int Dim>
class BdfSolver {
 public:
  using Vec = Eigen::Matrix<double, Dim, 1>;
  using Mat = Eigen::Matrix<double, Dim, Dim>;
  using Rhs = std::function<Vec(double, const Vec&)>;
  using Jacobian = std::function<Mat(double, const Vec&)>;

  static constexpr int kMaxOrder = 5;

  BdfSolver(Rhs f, Jacobian jac, double t0, const Vec& y0, double t_bound,
            const BdfOptions& options = {})
      : f_(std::move(f)), jac_(std::move(jac)), t_(t0), t_old_(t0), t_bound_(t_bound),
        y_(y0), opt_(options) {
    if (!(t_bound > t0)) throw InvalidArgument("BDF: t_bound must exceed t0");
    if (!(opt_.rtol > 0.0) || !(opt_.atol > 0.0)) throw InvalidArgument("BDF: tolerances must be > 0");
    constexpr double eps = std::numeric_limits<double>::epsilon();
    newton_tol_ = std::max(10.0 * eps / opt_.rtol, std::min(0.03, std::sqrt(opt_.rtol)));

    const std::array<double, kMaxOrder + 1> kappa = {0.0, -0.1850, -1.0 / 9.0, -0.0823, -0.0415, 0.0};
    gamma_[0] = 0.0;
    for (int i = 1; i <= kMaxOrder; ++i) gamma_[i] = gamma_[i - 1] + 1.0 / i;
    for (int i = 0; i <= kMaxOrder; ++i) {
      alpha_[i] = (1.0 - kappa[i]) * gamma_[i];
      error_const_[i] = kappa[i] * gamma_[i] + 1.0 / (i + 1);
    }

    const Vec f0 = f_(t0, y0);
    h_abs_ = opt_.first_step > 0.0 ? opt_.first_step : initial_step(f0);
    h_abs_ = std::min(h_abs_, opt_.max_step);
    jac_matrix_ = jac_(t0, y0);
    for (auto& d : diff_) d.setZero(y0.size());
    diff_[0] = y0;
    diff_[1] = f0 * h_abs_;
  }

  double t() const { return t_; }
  double t_old() const { return t_old_; }
  const Vec& y() const { return y_; }
  int order() const { return order_; }
  bool finished() const { return t_ >= t_bound_; }
  long steps() const { return n_steps_; }

  // Takes one accepted step. Throws ComputeError when the step size
  // underflows.
  void step() {
    const double min_step = 10.0 * std::abs(std::nextafter(t_, INFINITY) - t_);
    double h_abs = h_abs_;
    if (h_abs > opt_.max_step) {
      h_abs = opt_.max_step;
      change_diff(order_, opt_.max_step / h_abs_);
      n_equal_steps_ = 0;
    } else if (h_abs < min_step) {
      h_abs = min_step;
      change_diff(order_, min_step / h_abs_);
      n_equal_steps_ = 0;
    }

    bool factorized = false;
    Eigen::PartialPivLU<Mat> lu;
    bool current_jac = false;
    Vec y_new, d;
    double error_norm = 0.0;
    double safety = 0.0;
    Vec scale;
    double t_new = t_;
    int n_iter = 0;

    for (;;) {
      if (h_abs < min_step) {
        throw ComputeError("BDF: step size underflow at t = " + std::to_string(t_));
      }
      t_new = t_ + h_abs;
      if (t_new - t_bound_ > 0.0) {
        t_new = t_bound_;
        change_diff(order_, std::abs(t_new - t_) / h_abs);
        n_equal_steps_ = 0;
        factorized = false;
      }
      const double h = t_new - t_;
      h_abs = std::abs(h);

      Vec y_predict = diff_[0];
      for (int i = 1; i <= order_; ++i) y_predict += diff_[i];
      scale = (opt_.atol + opt_.rtol * y_predict.array().abs()).matrix();
      Vec psi = Vec::Zero(y_.size());
      for (int i = 1; i <= order_; ++i) psi += diff_[i] * gamma_[i];
      psi /= alpha_[order_];

      const double c = h / alpha_[order_];
      bool converged = false;
      for (;;) {
        if (!factorized) {
          lu.compute(Mat::Identity(y_.size(), y_.size()) - c * jac_matrix_);
          factorized = true;
        }
        converged = newton(t_new, y_predict, c, psi, lu, scale, y_new, d, n_iter);
        if (converged || current_jac) break;
        jac_matrix_ = jac_(t_new, y_predict);
        factorized = false;
        current_jac = true;
      }
      if (!converged) {
        h_abs *= 0.5;
        change_diff(order_, 0.5);
        n_equal_steps_ = 0;
        factorized = false;
        continue;
      }

      safety = 0.9 * (2 * kNewtonMaxIter + 1) / (2 * kNewtonMaxIter + n_iter);
      scale = (opt_.atol + opt_.rtol * y_new.array().abs()).matrix();
      error_norm = rms((error_const_[order_] * d).cwiseQuotient(scale));
      if (error_norm > 1.0) {
        const double factor =
            std::max(kMinFactor, safety * std::pow(error_norm, -1.0 / (order_ + 1)));
        h_abs *= factor;
        change_diff(order_, factor);
        n_equal_steps_ = 0;
      } else {
        break;
      }
    }

    ++n_steps_;
    ++n_equal_steps_;
    t_old_ = t_;
    t_ = t_new;
    y_ = y_new;
    h_abs_ = h_abs;

    // Backward differences of the new interpolating polynomial.
    diff_[order_ + 2] = d - diff_[order_ + 1];
    diff_[order_ + 1] = d;
    for (int i = order_; i >= 0; --i) diff_[i] += diff_[i + 1];

    if (n_equal_steps_ < order_ + 1) {
      snapshot_dense();
      return;
    }

    const double inf = std::numeric_limits<double>::infinity();
    const double error_m_norm =
        order_ > 1 ? rms((error_const_[order_ - 1] * diff_[order_]).cwiseQuotient(scale)) : inf;
    const double error_p_norm =
        order_ < kMaxOrder ? rms((error_const_[order_ + 1] * diff_[order_ + 2]).cwiseQuotient(scale))
                           : inf;
    const std::array<double, 3> norms = {error_m_norm, error_norm, error_p_norm};
    std::array<double, 3> factors{};
    int best = 0;
    for (int i = 0; i < 3; ++i) {
      factors[i] = norms[i] == 0.0 ? inf : std::pow(norms[i], -1.0 / (order_ + i));
      if (factors[i] > factors[best]) best = i;
    }
    order_ += best - 1;
    const double factor = std::min(kMaxFactor, safety * factors[best]);
    h_abs_ *= factor;
    change_diff(order_, factor);
    n_equal_steps_ = 0;
    snapshot_dense();
  }

  // Replaces the current solution (e.g. after a projection onto an
  // invariant manifold). The step history is kept.
  void set_state(const Vec& y) {
    y_ = y;
    diff_[0] = y;
  }

  // Interpolated solution for t in [t_old(), t()].
  Vec dense(double t) const {
    Vec y = dense_diff_[0];
    double p = 1.0;
    for (int j = 0; j < dense_order_; ++j) {
      p *= (t - (dense_t_ - dense_h_ * j)) / (dense_h_ * (1 + j));
      y += dense_diff_[j + 1] * p;
    }
    return y;
  }

 private:
  static constexpr int kNewtonMaxIter = 4;
  static constexpr double kMinFactor = 0.2;
  static constexpr double kMaxFactor = 10.0;

  static double rms(const Vec& v) { return v.norm() / std::sqrt(static_cast<double>(v.size())); }

  double initial_step(const Vec& f0) const {
    const Vec scale = (opt_.atol + opt_.rtol * y_.array().abs()).matrix();
    const double d0 = rms(y_.cwiseQuotient(scale));
    const double d1 = rms(f0.cwiseQuotient(scale));
    const double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    const Vec y1 = y_ + h0 * f0;
    const Vec f1 = f_(t_ + h0, y1);
    const double d2 = rms((f1 - f0).cwiseQuotient(scale)) / h0;
    const double h1 = (d1 <= 1e-15 && d2 <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                                   : std::pow(0.01 / std::max(d1, d2), 0.5);
    return std::min(100.0 * h0, h1);
  }

  bool newton(double t_new, const Vec& y_predict, double c, const Vec& psi,
              const Eigen::PartialPivLU<Mat>& lu, const Vec& scale, Vec& y, Vec& d,
              int& n_iter) const {
    y = y_predict;
    d = Vec::Zero(y_predict.size());
    double dy_norm_old = -1.0;
    for (int k = 0; k < kNewtonMaxIter; ++k) {
      n_iter = k + 1;
      const Vec f = f_(t_new, y);
      if (!f.allFinite()) return false;
      const Vec dy = lu.solve(c * f - psi - d);
      const double dy_norm = rms(dy.cwiseQuotient(scale));
      double rate = -1.0;
      if (dy_norm_old >= 0.0) {
        rate = dy_norm / dy_norm_old;
        if (rate >= 1.0 ||
            std::pow(rate, kNewtonMaxIter - k) / (1.0 - rate) * dy_norm > newton_tol_) {
          return false;
        }
      }
      y += dy;
      d += dy;
      if (dy_norm == 0.0 || (rate >= 0.0 && rate / (1.0 - rate) * dy_norm < newton_tol_)) {
        return true;
      }
      dy_norm_old = dy_norm;
    }
    return false;
  }

  // Rescales the difference array for a step-size ratio `factor`.
  void change_diff(int order, double factor) {
    const Eigen::MatrixXd r = compute_r(order, factor);
    const Eigen::MatrixXd u = compute_r(order, 1.0);
    const Eigen::MatrixXd ru = r * u;
    std::array<Vec, kMaxOrder + 3> old = diff_;
    for (int i = 0; i <= order; ++i) {
      diff_[i].setZero();
      for (int j = 0; j <= order; ++j) diff_[i] += ru(j, i) * old[j];
    }
  }

  static Eigen::MatrixXd compute_r(int order, double factor) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(order + 1, order + 1);
    m.row(0).setOnes();
    for (int i = 1; i <= order; ++i) {
      for (int j = 1; j <= order; ++j) m(i, j) = (i - 1 - factor * j) / i;
    }
    for (int i = 1; i <= order; ++i) m.row(i) = m.row(i).cwiseProduct(m.row(i - 1));
    return m;
  }

  void snapshot_dense() {
    dense_order_ = order_;
    dense_t_ = t_;
    dense_h_ = h_abs_;
    for (int i = 0; i <= order_; ++i) dense_diff_[i] = diff_[i];
  }

  Rhs f_;
  Jacobian jac_;
  double t_, t_old_, t_bound_;
  Vec y_;
  BdfOptions opt_;
  double newton_tol_ = 0.0;
  double h_abs_ = 0.0;
  int order_ = 1;
  int n_equal_steps_ = 0;
  long n_steps_ = 0;
  Mat jac_matrix_;
  std::array<double, kMaxOrder + 1> gamma_{}, alpha_{}, error_const_{};
  std::array<Vec, kMaxOrder + 3> diff_;
  int dense_order_ = 0;
  double dense_t_ = 0.0, dense_h_ = 1.0;
  std::array<Vec, kMaxOrder + 1> dense_diff_;
};

// Classic fourth-order Runge-Kutta step.
template <typename Vec, typename Rhs>
Vec rk4_step(const Rhs& f, double t, const Vec& y, double h) {
  const Vec k1 = f(t, y);
  const Vec k2 = f(t + 0.5 * h, Vec(y + 0.5 * h * k1));
  const Vec k3 = f(t + 0.5 * h, Vec(y + 0.5 * h * k2));
  const Vec k4 = f(t + h, Vec(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace btc
