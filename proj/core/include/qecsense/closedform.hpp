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

#include "qecsense/lindblad.hpp"

namespace qecsense {

struct EigenSolution {
  cplx discriminant;  // D
  cplx sqrt_d;        // principal branch
  cplx lambda_plus;
  cplx lambda_minus;
  cplx c_plus;
  cplx c_minus;
};

EigenSolution eigen_solution(const SensorParams& p);

// q(tau) = C+ e^{lambda+ tau} - C- e^{lambda- tau}; <sigma_x^L> = 2 Re q.
cplx q_full(const SensorParams& p, double tau);
double expectation_full(const SensorParams& p, double tau);

struct Gradient {
  double d_omega;
  double d_gamma;  // with respect to gamma_err
};

// Analytic derivatives of 2 Re q_full, including the dC/d(param) terms.
Gradient expectation_full_gradient(const SensorParams& p, double tau);

struct EffectiveParams {
  double omega_eff;
  double gamma_eff;
  int order;
};

struct EffectiveParamsDerivative {
  double d_omega_eff;  // d omega_eff / d omega
  double d_gamma_eff;  // d gamma_eff / d omega
};

EffectiveParams effective_params(const SensorParams& p, int order);
EffectiveParamsDerivative effective_params_domega(const SensorParams& p, int order);

struct ValidityResult {
  bool valid;
  double margin;  // left side of the first inequality, negative inside the region
  double second;  // left side of the second inequality, must be positive
};

ValidityResult validity_check(const SensorParams& p);

struct SimplifiedValue {
  double value;
  bool outside_validity;  // warning flag, the value is still returned
};

// Two-term large-gamma_qec expansion. order selects the effective parameters
// used in the slow term; order 1 is the literal first-order expression.
SimplifiedValue expectation_simplified(const SensorParams& p, double tau, int order = 1);

double expectation_reduced(const EffectiveParams& ep, double tau);
double expectation_conjectured(const SensorParams& p, double tau);

enum class UncorrectedForm { exact, reduced };

// gamma_qec is ignored; throws std::domain_error for gamma_err >= omega.
double expectation_uncorrected(const SensorParams& p, double tau,
                               UncorrectedForm form = UncorrectedForm::exact);
double uncorrected_frequency(const SensorParams& p);

}  // namespace qecsense
