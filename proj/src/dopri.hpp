// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "gibbslab/error.hpp"

namespace gibbslab::detail {

/// Dormand-Prince 5(4) for small autonomous-in-structure systems y' = f(t, y).
template <std::size_t Dim>
class Dopri5 {
 public:
  using State = std::array<double, Dim>;

  Dopri5(double rtol, double atol) : rtol_(rtol), atol_(atol) {}

  /// Advances y from t0 to t1 (either direction) with local error control.
  /// on_step(t, y) is called after every accepted step; returning true stops
  /// the integration early and leaves (t, y) at that step.
  template <class Rhs, class OnStep>
  double advance(const Rhs& rhs, State& y, double t0, double t1, OnStep&& on_step) {
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    double t = t0;
    double h = dir * std::min(std::abs(t1 - t0), step_hint_);
    int guard = 0;
    while (dir * (t1 - t) > 0.0) {
      if (++guard > 10000000) fail(ErrorKind::Numerical, "Dopri5: step budget exhausted");
      if (dir * (t + h - t1) > 0.0) h = t1 - t;
      State y_new, err;
      step(rhs, t, y, h, y_new, err);
      double norm = 0.0;
      for (std::size_t i = 0; i < Dim; ++i) {
        const double scale = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(y_new[i]));
        norm = std::max(norm, std::abs(err[i]) / scale);
      }
      if (!std::isfinite(norm)) {
        h *= 0.25;
        continue;
      }
      if (norm <= 1.0) {
        t = (std::abs(t1 - (t + h)) <= 1e-15 * std::max(1.0, std::abs(t1))) ? t1 : t + h;
        y = y_new;
        const double grow = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
        if (std::abs(t1 - t) > 0.0) step_hint_ = std::abs(h) * grow;
        h *= grow;
        if (on_step(t, y)) return t;
      } else {
        h *= std::clamp(0.9 * std::pow(norm, -0.25), 0.1, 0.9);
      }
      if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)))
        fail(ErrorKind::Numerical, "Dopri5: step size underflow");
    }
    return t;
  }

  template <class Rhs>
  void advance(const Rhs& rhs, State& y, double t0, double t1) {
    advance(rhs, y, t0, t1, [](double, const State&) { return false; });
  }

 private:
  template <class Rhs>
  static void step(const Rhs& f, double t, const State& y, double h, State& out, State& err) {
    State k1, k2, k3, k4, k5, k6, k7, tmp;
    f(t, y, k1);
    for (std::size_t i = 0; i < Dim; ++i) tmp[i] = y[i] + h * (k1[i] / 5.0);
    f(t + h / 5.0, tmp, k2);
    for (std::size_t i = 0; i < Dim; ++i) tmp[i] = y[i] + h * (3.0 / 40 * k1[i] + 9.0 / 40 * k2[i]);
    f(t + 3.0 * h / 10.0, tmp, k3);
    for (std::size_t i = 0; i < Dim; ++i)
      tmp[i] = y[i] + h * (44.0 / 45 * k1[i] - 56.0 / 15 * k2[i] + 32.0 / 9 * k3[i]);
    f(t + 4.0 * h / 5.0, tmp, k4);
    for (std::size_t i = 0; i < Dim; ++i)
      tmp[i] = y[i] + h * (19372.0 / 6561 * k1[i] - 25360.0 / 2187 * k2[i] +
                           64448.0 / 6561 * k3[i] - 212.0 / 729 * k4[i]);
    f(t + 8.0 * h / 9.0, tmp, k5);
    for (std::size_t i = 0; i < Dim; ++i)
      tmp[i] = y[i] + h * (9017.0 / 3168 * k1[i] - 355.0 / 33 * k2[i] + 46732.0 / 5247 * k3[i] +
                           49.0 / 176 * k4[i] - 5103.0 / 18656 * k5[i]);
    f(t + h, tmp, k6);
    for (std::size_t i = 0; i < Dim; ++i)
      out[i] = y[i] + h * (35.0 / 384 * k1[i] + 500.0 / 1113 * k3[i] + 125.0 / 192 * k4[i] -
                           2187.0 / 6784 * k5[i] + 11.0 / 84 * k6[i]);
    f(t + h, out, k7);
    for (std::size_t i = 0; i < Dim; ++i) {
      const double e = (35.0 / 384 - 5179.0 / 57600) * k1[i] +
                       (500.0 / 1113 - 7571.0 / 16695) * k3[i] +
                       (125.0 / 192 - 393.0 / 640) * k4[i] +
                       (-2187.0 / 6784 + 92097.0 / 339200) * k5[i] +
                       (11.0 / 84 - 187.0 / 2100) * k6[i] - (1.0 / 40) * k7[i];
      err[i] = h * e;
    }
  }

  double rtol_;
  double atol_;
  double step_hint_ = 1e-3;
};

}  // namespace gibbslab::detail
