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

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qecsense/ode.hpp"
#include "qecsense/qcore.hpp"

namespace qecsense {

struct SensorParams {
  int n = 3;
  double omega = 1.0;      // combined gap omega_q + 2 xi V
  double gamma_err = 0.0;  // per-qubit bit-flip rate
  double gamma_qec = 0.0;  // correction rate, 0 disables QEC
  std::optional<double> omega_q;
  std::optional<double> xi;
  std::optional<double> v_signal;

  // Throws std::invalid_argument on violated invariants.
  void validate() const;
};

enum class Provenance { simulated, analytic_full, analytic_reduced, conjectured, uncorrected, discrete };

std::string_view to_string(Provenance p);

struct ExpectationTrace {
  std::vector<double> taus;
  std::vector<double> values;
  Provenance provenance = Provenance::simulated;
  SensorParams params;

  void validate() const;
};

std::vector<double> uniform_grid(double t0, double t1, std::size_t n);

Operator hamiltonian(const SensorParams& p);
std::vector<Operator> error_jumps(const SensorParams& p);
// L_qec^(j) = sqrt(gamma_qec) sigma_x^(j) (1 - Z_j Z_k)/2 (1 - Z_j Z_l)/2.
std::vector<Operator> qec_jumps(const SensorParams& p);
Superoperator build_liouvillian(const SensorParams& p);

std::vector<DensityMatrix> evolve(const SensorParams& p, const DensityMatrix& rho0,
                                  const std::vector<double>& taus, const OdeOptions& opt = {});

// <sigma_x^L> read from the coherence element: 2 Re <0..0|rho|1..1>.
double logical_coherence_expectation(const Matrix& rho);
ExpectationTrace ramsey_trace(const SensorParams& p, const std::vector<double>& taus,
                              const OdeOptions& opt = {});

// Reduced coherence system in the order (q, e, e*, q*), q = <000|rho|111> and
// e = <100|rho|011> + <010|rho|101> + <001|rho|110>.
using Coherence4 = Eigen::Vector4cd;

Coherence4 coherence_sector(const Matrix& rho);
Eigen::Matrix4cd reduced_matrix(const SensorParams& p, bool keep_coupling);
Coherence4 reduced_rhs(const SensorParams& p, const Coherence4& state, bool keep_coupling);
std::vector<Coherence4> integrate_reduced(const SensorParams& p, const std::vector<double>& taus,
                                          bool keep_coupling, const OdeOptions& opt = {});

}  // namespace qecsense
