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

#include <string>
#include <vector>

#include "qecsense/lindblad.hpp"

namespace qecsense {

enum class NoiseKind { optimal, realistic };

struct NoiseModel {
  NoiseKind kind = NoiseKind::optimal;
  double p = 0.0;  // total p_N for optimal, per-qubit flip probability for realistic

  static NoiseModel optimal(double p_noise) { return {NoiseKind::optimal, p_noise}; }
  static NoiseModel realistic(double p_flip) { return {NoiseKind::realistic, p_flip}; }
  double p_noise() const;
};

struct CycleSpec {
  unsigned long long c = 0;
  double delta_tau = 0.0;
  NoiseModel noise;

  double tau() const { return static_cast<double>(c) * delta_tau; }
  double p_noise() const { return noise.p_noise(); }
  void validate() const;
};

struct NoiseChannels {
  Channel full;        // N = p_I id + p_N N'
  Channel erroneous;   // N' with weights c_k / p_N, identity when p_N = 0
  double p_noise;
};

struct BiasReport {
  double commutator_norm;
  double delta_observable;
  bool is_biased;
};

NoiseChannels noise_channel(const NoiseModel& model, int n = 3);
Channel correction_channel(int n = 3);
Matrix sensing_unitary(const SensorParams& p, double delta_tau);
Channel sensing_channel(const SensorParams& p, double delta_tau);

// S(C) S(U) S(N), one noisy corrected cycle.
Superoperator cycle_superoperator(const CycleSpec& spec, const SensorParams& p);
// S(C) S(U) S(N') S(U^-1), the map raised to powers in the binomial sum.
Superoperator binomial_kernel(const CycleSpec& spec, const SensorParams& p);

DensityMatrix ideal_state(const SensorParams& p, const DensityMatrix& rho0, double tau);
DensityMatrix iterate_cycles(const CycleSpec& spec, const SensorParams& p, const DensityMatrix& rho0);

// Max over the logical basis of the entrywise modulus of [C o U, C o U o N'].
double binomial_commutator_norm(const CycleSpec& spec, const SensorParams& p);

class CommutationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

DensityMatrix binomial_form(const CycleSpec& spec, const SensorParams& p, const DensityMatrix& rho_tau,
                            bool verify = false);

// [U o N', U^-1](rho_L) = U N' U^-1 (rho_L) - N'(rho_L) over the logical basis.
BiasReport biasedness_check(const Channel& sensing, const Channel& noise_err_part,
                            const std::vector<Matrix>& logical_basis,
                            double tol = kTol.commutator);

// [C o U o N' o U^-1]^{round(c p_N)}(rho_tau).
DensityMatrix unbiased_reconstruction(const CycleSpec& spec, const SensorParams& p,
                                      const DensityMatrix& rho_tau);
double bias_of_observable(const CycleSpec& spec, const SensorParams& p, const Operator& observable,
                          const DensityMatrix& rho_tau);

double expectation_discrete_normal(const CycleSpec& spec, const SensorParams& p, double tau);
// Rule-of-thumb check for the normal approximation: c p_N >= 5 and c p_I >= 5.
bool normal_regime(const CycleSpec& spec);

// Per-cycle <sigma_x^L> for c' = 0..spec.c starting from the Ramsey state.
struct DiscreteTraces {
  std::vector<double> taus;
  std::vector<double> ideal;
  std::vector<double> uncorrected;    // [U o N]^c'
  std::vector<double> corrected;      // [C o U o N]^c'
  std::vector<double> unbiased;       // binomial kernel to the power round(c' p_N)
  std::vector<double> normal_approx;  // closed form at each tau
};

DiscreteTraces discrete_traces(const CycleSpec& spec, const SensorParams& p);

}  // namespace qecsense
