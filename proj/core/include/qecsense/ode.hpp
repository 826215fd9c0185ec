// Copyright 2026 The qec-sense Authors
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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

// Embedded Dormand-Prince 5(4) integrator for Eigen vector states.

namespace qecsense {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 50'000'000;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double tau)
      : std::runtime_error(what + " at tau = " + std::to_string(tau)), tau_(tau) {}
  double tau() const { return tau_; }

 private:
  double tau_;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

// Integrates y' = f(t, y) from outputs.front() and calls observe(i, y) at every
// requested output time. Steps are clipped so each output time is hit exactly.
template <class State, class Rhs, class Observer>
OdeStats integrate_dp5(Rhs&& f, State y, const std::vector<double>& outputs,
                       const OdeOptions& opt, Observer&& observe) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  OdeStats stats;
  if (outputs.empty()) return stats;
  for (std::size_t i = 1; i < outputs.size(); ++i) {
    if (!(outputs[i] > outputs[i - 1])) {
      throw std::invalid_argument("integrate_dp5: output times must be strictly increasing");
    }
  }

  double t = outputs.front();
  observe(std::size_t{0}, y);
  if (outputs.size() == 1) return stats;

  const double span = outputs.back() - outputs.front();
  double h = std::min(opt.max_step, 1e-3 * span);
  State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
  f(t, y, k1);

  std::size_t next = 1;
  while (next < outputs.size()) {
    if (stats.accepted + stats.rejected > opt.max_steps) {
      throw IntegrationError("integrate_dp5: step budget exhausted", t);
    }
    const double target = outputs[next];
    const bool clipped = t + h >= target;
    const double hs = clipped ? target - t : h;
    if (hs < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)) &&
        !clipped) {
      throw IntegrationError("integrate_dp5: step size underflow", t);
    }

    ytmp = y + hs * (a21 * k1);
    f(t + c2 * hs, ytmp, k2);
    ytmp = y + hs * (a31 * k1 + a32 * k2);
    f(t + c3 * hs, ytmp, k3);
    ytmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * hs, ytmp, k4);
    ytmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * hs, ytmp, k5);
    ytmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + hs, ytmp, k6);
    ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + hs, ynew, k7);
    err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double acc = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y(i)), std::abs(ynew(i)));
      const double r = std::abs(err(i)) / sc;
      acc += r * r;
    }
    const double norm = std::sqrt(acc / static_cast<double>(y.size()));
    if (!std::isfinite(norm)) throw IntegrationError("integrate_dp5: non-finite state", t);

    if (norm <= 1.0) {
      ++stats.accepted;
      t = clipped ? target : t + hs;
      y.swap(ynew);
      k1.swap(k7);
      if (clipped) {
        observe(next, y);
        ++next;
      }
      const double fac = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
      // A clipped step says nothing about the natural step, so only grow from it.
      h = clipped ? std::max(h, hs * fac) : hs * fac;
    } else {
      ++stats.rejected;
      h = hs * std::clamp(0.9 * std::pow(norm, -0.2), 0.1, 1.0);
      if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
        throw IntegrationError("integrate_dp5: step size underflow", t);
      }
    }
    h = std::min(h, opt.max_step);
  }
  return stats;
}

}  // namespace qecsense
