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

#include "qecsense/closedform.hpp"

#include <cmath>
#include <stdexcept>

namespace qecsense {

namespace {

constexpr cplx kI(0.0, 1.0);

void require_order(int order) {
  if (order < 1 || order > 3) throw std::invalid_argument("effective_params: order must be 1, 2 or 3");
}

}  // namespace

EigenSolution eigen_solution(const SensorParams& p) {
  const double w = p.omega, g = p.gamma_err, gq = p.gamma_qec;
  EigenSolution s;
  s.discriminant = gq * gq + 12.0 * gq * g + 12.0 * g * g - 4.0 * kI * gq * w - 4.0 * w * w;
  s.sqrt_d = std::sqrt(s.discriminant);
  const cplx base = -gq - 6.0 * g - 4.0 * kI * w;
  s.lambda_plus = 0.5 * (base + s.sqrt_d);
  s.lambda_minus = 0.5 * (base - s.sqrt_d);
  const cplx common = (gq - 2.0 * kI * w) / (4.0 * s.sqrt_d);
  s.c_plus = common + 0.25;
  s.c_minus = common - 0.25;
  return s;
}

cplx q_full(const SensorParams& p, double tau) {
  const EigenSolution s = eigen_solution(p);
  return s.c_plus * std::exp(s.lambda_plus * tau) - s.c_minus * std::exp(s.lambda_minus * tau);
}

double expectation_full(const SensorParams& p, double tau) { return 2.0 * q_full(p, tau).real(); }

Gradient expectation_full_gradient(const SensorParams& p, double tau) {
  const double w = p.omega, g = p.gamma_err, gq = p.gamma_qec;
  const EigenSolution s = eigen_solution(p);
  const cplx num = gq - 2.0 * kI * w;
  const cplx ep = std::exp(s.lambda_plus * tau);
  const cplx em = std::exp(s.lambda_minus * tau);

  // d/dx of q for a parameter x with dD/dx = dd and d(num)/dx = dn.
  auto dq = [&](cplx dd, cplx dn, cplx dbase) {
    const cplx ds = dd / (2.0 * s.sqrt_d);
    const cplx dc = (dn * s.sqrt_d - num * ds) / (4.0 * s.discriminant);
    const cplx dlp = 0.5 * (dbase + ds);
    const cplx dlm = 0.5 * (dbase - ds);
    return (dc + s.c_plus * tau * dlp) * ep - (dc + s.c_minus * tau * dlm) * em;
  };

  const cplx dq_w = dq(-4.0 * kI * gq - 8.0 * w, -2.0 * kI, -4.0 * kI);
  const cplx dq_g = dq(12.0 * gq + 24.0 * g, 0.0, -6.0);
  return {2.0 * dq_w.real(), 2.0 * dq_g.real()};
}

EffectiveParams effective_params(const SensorParams& p, int order) {
  require_order(order);
  if (!(p.gamma_qec > 0.0)) throw std::invalid_argument("effective_params: gamma_qec must be > 0");
  const double w = p.omega, g = p.gamma_err, gq = p.gamma_qec;
  const double r = g / gq;
  double wf = 1.0 - 2.0 * r;
  double ge = 2.0 * r * g;
  if (order >= 2) {
    wf += 16.0 * r * r;
    ge += -12.0 * r * r * g + 4.0 * w * w * g / (gq * gq);
  }
  if (order >= 3) {
    wf += -141.0 * r * r * r + 8.0 * g * w * w / (gq * gq * gq);
    ge += 84.0 * r * r * r * g - 68.0 * g * w * w * g / (gq * gq * gq);
  }
  return {w * wf, ge, order};
}

EffectiveParamsDerivative effective_params_domega(const SensorParams& p, int order) {
  require_order(order);
  if (!(p.gamma_qec > 0.0)) throw std::invalid_argument("effective_params: gamma_qec must be > 0");
  const double w = p.omega, g = p.gamma_err, gq = p.gamma_qec;
  const double r = g / gq;
  double dw = 1.0 - 2.0 * r;
  double dg = 0.0;
  if (order >= 2) {
    dw += 16.0 * r * r;
    dg += 8.0 * w * g / (gq * gq);
  }
  if (order >= 3) {
    dw += -141.0 * r * r * r + 24.0 * g * w * w / (gq * gq * gq);
    dg += -136.0 * g * g * w / (gq * gq * gq);
  }
  return {dw, dg};
}

ValidityResult validity_check(const SensorParams& p) {
  const double w = p.omega, g = p.gamma_err, gq = p.gamma_qec;
  const double a = 12.0 * gq * g + 12.0 * g * g - 4.0 * w * w;
  const double b = 16.0 * gq * gq * w * w;
  const double c = gq * gq * gq * gq;
  ValidityResult v;
  v.margin = a * a + b - c;
  v.second = a * a + b + c;
  v.valid = v.margin < 0.0 && v.second > 0.0;
  return v;
}

SimplifiedValue expectation_simplified(const SensorParams& p, double tau, int order) {
  const double w = p.omega, g = p.gamma_err, gq = p.gamma_qec;
  const bool outside = !validity_check(p).valid;
  if (g == 0.0) return {std::cos(3.0 * w * tau), outside};
  const EffectiveParams ep = effective_params(p, order);
  const double r = g / gq;
  const double c_plus = 0.5 - 1.5 * r;
  const double c_minus = -1.5 * r;
  const double slow = 2.0 * c_plus * std::exp(-3.0 * ep.gamma_eff * tau) * std::cos(3.0 * ep.omega_eff * tau);
  const double fast = 2.0 * c_minus * std::exp(-(gq + 6.0 * g - 6.0 * g * r) * tau) *
                      std::cos(w * (1.0 + 6.0 * r) * tau);
  return {slow - fast, outside};
}

double expectation_reduced(const EffectiveParams& ep, double tau) {
  return std::exp(-3.0 * ep.gamma_eff * tau) * std::cos(3.0 * ep.omega_eff * tau);
}

double expectation_conjectured(const SensorParams& p, double tau) {
  return std::exp(-3.0 * p.gamma_err * tau) * std::cos(3.0 * p.omega * tau);
}

double uncorrected_frequency(const SensorParams& p) {
  return p.omega * (1.0 - 0.5 * p.gamma_err * p.gamma_err / (p.omega * p.omega));
}

double expectation_uncorrected(const SensorParams& p, double tau, UncorrectedForm form) {
  const double w = p.omega, g = p.gamma_err;
  if (!(g < w)) throw std::domain_error("expectation_uncorrected: requires gamma_err < omega");
  const double env = std::exp(-3.0 * g * tau);
  if (form == UncorrectedForm::reduced) return env * std::cos(3.0 * uncorrected_frequency(p) * tau);
  const double s = std::sqrt(w * w - g * g);
  const double cs = std::cos(s * tau), sn = std::sin(s * tau);
  // Sign of the sin^3 term follows from 2 Re q = e^{-3 g tau}[Re A^3 + B^3] with
  // A = cos(s tau) - i (w/s) sin(s tau) and B = (g/s) sin(s tau).
  return (w * w / (s * s)) * env * std::cos(3.0 * s * tau) -
         (g * g / (s * s * s)) * env * (s * cs * cs * cs - g * sn * sn * sn);
}

}  // namespace qecsense
