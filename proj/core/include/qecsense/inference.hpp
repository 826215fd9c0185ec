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

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qecsense/closedform.hpp"

namespace qecsense {

enum class ModelKind { conjectured, proposed_full, proposed_reduced };
enum class Param { omega, gamma };

std::string_view to_string(ModelKind k);

struct ModelParams {
  double omega;
  double gamma;  // gamma_err
};

// <sigma_x^L>(tau; omega, gamma_err) for a fixed, known gamma_qec.
class ExpectationModel {
 public:
  ExpectationModel(ModelKind kind, double gamma_qec, int order = 1);

  ModelKind kind() const { return kind_; }
  double gamma_qec() const { return gamma_qec_; }
  int order() const { return order_; }

  double value(const ModelParams& th, double tau) const;
  std::optional<double> analytic_derivative(Param which, const ModelParams& th, double tau) const;
  // Central difference with step h = 1e-6 omega.
  double fd_derivative(Param which, const ModelParams& th, double tau) const;
  double derivative(Param which, const ModelParams& th, double tau) const;

 private:
  SensorParams sensor(const ModelParams& th) const;

  ModelKind kind_;
  double gamma_qec_;
  int order_;
};

struct ShotRecord {
  double tau = 0.0;
  std::vector<signed char> outcomes;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  bool clipped = false;  // model value was outside [-1, 1] by less than the reject tolerance

  std::size_t n_shots() const { return outcomes.size(); }
  double mean() const;
};

// i.i.d. +-1 outcomes with P(+1) = (1 + model(tau)) / 2 from Philox(seed, stream).
ShotRecord sample_shots(const std::function<double(double)>& model, double tau, std::size_t n_shots,
                        std::uint64_t seed, std::uint64_t stream = 0);

struct FitBracket {
  double omega_lo, omega_hi, gamma_lo, gamma_hi;
  std::size_t n_omega = 200;
  std::size_t n_gamma = 200;

  // omega in [0.5, 1.5] omega_seed, gamma in [0, 5] gamma_seed.
  static FitBracket around(double omega_seed, double gamma_seed);
  void validate() const;
};

struct FitResult {
  double omega_hat = 0.0;
  double gamma_hat = 0.0;
  ModelKind model = ModelKind::conjectured;
  double residual_sum = 0.0;
  double se_omega = 0.0;  // sandwich standard errors from binomial shot noise
  double se_gamma = 0.0;
};

// Grid-scan plus local refinement of sum_i [xbar_i - model(tau_i)]^2 over a
// fixed set of sample times. The model table is built once and reused.
class GridFitter {
 public:
  GridFitter(ExpectationModel model, std::vector<double> taus, FitBracket bracket);

  // means[i] is the sample mean at taus[i]; shots[i] its shot count.
  FitResult fit(const std::vector<double>& means, const std::vector<std::size_t>& shots) const;
  double objective(const ModelParams& th, const std::vector<double>& means) const;
  const std::vector<double>& taus() const { return taus_; }

 private:
  ExpectationModel model_;
  std::vector<double> taus_;
  FitBracket bracket_;
  std::vector<double> table_;   // [gamma][omega][tau]
  std::vector<double> sumsq_;   // sum over tau of table^2 per grid point
};

FitResult least_squares_fit(const std::vector<ShotRecord>& records, const ExpectationModel& model,
                            const FitBracket& bracket);

struct FitEnsemble {
  std::vector<FitResult> fits;
  double mean_omega = 0.0;
  double mean_gamma = 0.0;
  double variance_omega = 0.0;  // unbiased sample variance
  double variance_gamma = 0.0;
  double bias_stat = 0.0;
};

// b = mean((omega - omega_hat)^2) - Var(omega_hat). Requires >= 100 fits.
double bias_statistic(const std::vector<FitResult>& repetitions, double omega_true);
FitEnsemble summarize(std::vector<FitResult> repetitions, double omega_true);

// Per-shot classical Fisher information of the binary outcome; +inf when |<sigma_x^L>| = 1.
double fisher_information(const ExpectationModel& model, Param which, const ModelParams& th, double tau);

// Sample times and shot counts making up one "tau point" of a CRB experiment.
struct Design {
  std::vector<double> times;
  std::vector<std::size_t> shots;

  std::size_t total_shots() const;
  static Design single(double tau, std::size_t n_shots);
  // k evenly spaced times spanning `span` centred at tau, shots split evenly.
  static Design window(double tau, std::size_t n_shots, std::size_t k, double span);
  // k evenly spaced times tau/k, 2 tau/k, ..., tau, shots split evenly.
  static Design ramp(double tau, std::size_t n_shots, std::size_t k);
};

struct BoundReport {
  double tau = 0.0;
  double fisher_omega = 0.0;  // shot-weighted mean per-shot information
  double fisher_gamma = 0.0;
  double crb_rhs = 0.0;       // (1/I_omega + 1/I_gamma) / N
  double total_variance = 0.0;
  double tolerance = 0.0;     // z crb_rhs sqrt(2/(R-1))
  bool violated = false;
};

BoundReport crb_audit(const std::vector<FitResult>& fits, const ExpectationModel& model,
                      const ModelParams& truth, double tau, const Design& design, double z = 3.0);
BoundReport crb_audit(const std::vector<FitResult>& fits, const ExpectationModel& model,
                      const ModelParams& truth, double tau, std::size_t n_shots, double z = 3.0);

// 1 / |Re lambda_+|, the slow decay time of the closed-form solution.
double decoherence_knee(const SensorParams& p);

struct CrbExperimentConfig {
  SensorParams truth;
  std::vector<double> tau_points;
  std::size_t shots_per_point = 10'000;
  std::size_t repetitions = 200;
  std::size_t window_samples = 16;
  double window_span = 0.0;  // 0 selects one logical period 2 pi / (3 omega)
  bool ramp = true;          // sample (0, tau] instead of a window around tau
  double max_spacing = 0.5;  // ramp only: K grows so that tau / K <= max_spacing
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double z = 3.0;
};

struct CrbPointResult {
  double tau;
  FitEnsemble conjectured;
  FitEnsemble proposed;
  BoundReport conjectured_bound;
  BoundReport proposed_bound;
};

// Data from the closed-form model at `truth`; both the conjectured and the
// full proposed model are fit to every repetition. The RNG stream of sample
// time i in repetition task t = point * R + rep is t * 65536 + i.
std::vector<CrbPointResult> run_crb_experiment(const CrbExperimentConfig& cfg);

enum class SensitivityModel { naive, proposed_reduced, proposed_reduced_refined, proposed_full };

std::string_view to_string(SensitivityModel m);

// |d omega|(tau). naive uses (p.omega, p.gamma_err); the reduced forms use ep
// with d omega_eff / d omega from p; proposed_full uses the closed form at p.
// Returns +inf at nodes of the derivative.
double min_detectable_signal(SensitivityModel model, const SensorParams& p, const EffectiveParams& ep,
                             double tau, double n_shots);
double standard_quantum_limit(double tau, double n_shots);

struct OptimalTime {
  double tau_opt;
  long long k_opt;
};

// k_opt = round((2/pi) omega/gamma) with ties away from zero, tau_opt = (pi/2) k_opt/(3 omega).
// Even k_opt lands on a node of sin(3 omega tau). Returns nullopt for gamma = 0.
std::optional<OptimalTime> optimal_sensing_time(double omega_est, double gamma_est);

}  // namespace qecsense
