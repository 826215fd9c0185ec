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


#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qecsense/inference.hpp"

using namespace qecsense;

namespace {

SensorParams fig3() {
  SensorParams p;
  p.gamma_err = 0.2;
  p.gamma_qec = 16.6;
  return p;
}

}  // namespace

TEST_CASE("expectation models") {
  const ModelParams th{1.0, 0.2};
  const ExpectationModel conj(ModelKind::conjectured, 16.6);
  const ExpectationModel full(ModelKind::proposed_full, 16.6);
  const ExpectationModel red(ModelKind::proposed_reduced, 16.6);
  CHECK(conj.value(th, 1.0) == doctest::Approx(std::exp(-0.6) * std::cos(3.0)));
  CHECK(full.value(th, 2.0) == doctest::Approx(0.85338133840397712).epsilon(1e-12));
  for (double t : {0.3, 1.7, 9.0}) {
    CHECK(*conj.analytic_derivative(Param::omega, th, t) ==
          doctest::Approx(conj.fd_derivative(Param::omega, th, t)).epsilon(1e-6));
    CHECK(*full.analytic_derivative(Param::gamma, th, t) ==
          doctest::Approx(full.fd_derivative(Param::gamma, th, t)).epsilon(1e-6));
  }
  CHECK_FALSE(red.analytic_derivative(Param::gamma, th, 1.0).has_value());
  CHECK(to_string(ModelKind::proposed_full) == "proposed_full");
}

TEST_CASE("shot sampling") {
  const auto model = [](double t) { return std::cos(t); };
  const auto a = sample_shots(model, 0.7, 5000, 99, 3);
  const auto b = sample_shots(model, 0.7, 5000, 99, 3);
  const auto c = sample_shots(model, 0.7, 5000, 99, 4);
  CHECK(a.outcomes == b.outcomes);
  CHECK(a.outcomes != c.outcomes);
  CHECK(a.n_shots() == 5000);
  CHECK(std::abs(a.mean() - std::cos(0.7)) < 4.0 * std::sin(0.7) / std::sqrt(5000.0));
  CHECK_FALSE(a.clipped);
  CHECK(sample_shots([](double) { return 1.0 + 1e-6; }, 0.0, 10, 1).clipped);
  CHECK_FALSE(sample_shots([](double) { return 1.0 + 1e-12; }, 0.0, 10, 1).clipped);
  CHECK_THROWS_AS(sample_shots([](double) { return 1.01; }, 0.0, 10, 1), std::domain_error);
  CHECK_THROWS(sample_shots(model, 0.0, 0, 1));
}

TEST_CASE("noise-free records fit back to the truth") {
  const ExpectationModel full(ModelKind::proposed_full, 16.6);
  const ModelParams truth{1.0, 0.2};
  const Design d = Design::ramp(6.0, 1600, 16);
  std::vector<double> means;
  for (double t : d.times) means.push_back(full.value(truth, t));
  const GridFitter fitter(full, d.times, FitBracket::around(0.97, 0.15));
  const auto r = fitter.fit(means, d.shots);
  CHECK(r.omega_hat == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.gamma_hat == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(r.residual_sum < 1e-14);
  CHECK(r.residual_sum <= fitter.objective(truth, means) + 1e-15);
  CHECK(r.se_omega > 0.0);
}

TEST_CASE("least-squares fit on shot records") {
  const ExpectationModel full(ModelKind::proposed_full, 16.6);
  const ModelParams truth{1.0, 0.2};
  std::vector<ShotRecord> recs;
  const Design d = Design::ramp(8.0, 16000, 16);
  for (std::size_t i = 0; i < d.times.size(); ++i)
    recs.push_back(sample_shots([&](double t) { return full.value(truth, t); }, d.times[i], d.shots[i], 5, i));
  const auto r = least_squares_fit(recs, full, FitBracket::around(1.0, 0.2));
  CHECK(std::abs(r.omega_hat - 1.0) < 4.0 * r.se_omega);
  CHECK(std::abs(r.gamma_hat - 0.2) < 4.0 * r.se_gamma);
}

TEST_CASE("brackets and designs") {
  CHECK_THROWS(FitBracket{1.0, 0.5, 0.0, 1.0, 200, 200}.validate());
  CHECK_THROWS(FitBracket{0.0, 1.0, 0.0, 1.0, 200, 200}.validate());
  const auto w = Design::window(10.0, 1000, 10, 2.0);
  CHECK(w.total_shots() == 1000);
  CHECK(w.times.front() == doctest::Approx(9.1));
  CHECK(w.times.back() == doctest::Approx(10.9));
  const auto r = Design::ramp(4.0, 100, 4);
  CHECK(r.times == std::vector<double>{1.0, 2.0, 3.0, 4.0});
  CHECK(Design::single(3.0, 7).total_shots() == 7);
}

TEST_CASE("fisher information") {
  const ExpectationModel conj(ModelKind::conjectured, 16.6);
  const ModelParams th{1.0, 0.2};
  const double t = 0.9;
  const double x = std::exp(-0.6 * t) * std::cos(3.0 * t);
  const double dx = -3.0 * t * std::exp(-0.6 * t) * std::sin(3.0 * t);
  CHECK(fisher_information(conj, Param::omega, th, t) == doctest::Approx(dx * dx / (1 - x * x)));
  CHECK(std::isinf(fisher_information(conj, Param::omega, {1.0, 0.0}, 0.0)));
}

TEST_CASE("ensemble statistics need enough repetitions") {
  std::vector<FitResult> few(10);
  CHECK_THROWS(summarize(few, 1.0));
  std::vector<FitResult> fits(100);
  for (std::size_t i = 0; i < fits.size(); ++i) fits[i].omega_hat = 1.0 + (i % 2 ? 0.01 : -0.01) + 0.002;
  const auto e = summarize(fits, 1.0);
  CHECK(e.mean_omega == doctest::Approx(1.002));
  CHECK(e.bias_stat == doctest::Approx(0.002 * 0.002).epsilon(0.05));
}

TEST_CASE("small CRB experiment shows the violation pattern") {
  CrbExperimentConfig c;
  c.truth = fig3();
  c.tau_points = {6.0};
  c.repetitions = 100;
  c.seed = 3;
  const auto res = run_crb_experiment(c);
  REQUIRE(res.size() == 1);
  CHECK(res[0].conjectured_bound.violated);
  CHECK_FALSE(res[0].proposed_bound.violated);
  CHECK(res[0].proposed.bias_stat < res[0].conjectured.bias_stat);
  // Same seed, same numbers.
  const auto again = run_crb_experiment(c);
  CHECK(again[0].proposed_bound.total_variance == res[0].proposed_bound.total_variance);
}

TEST_CASE("optimal sensing time") {
  const auto o = optimal_sensing_time(1.0, 0.2);
  REQUIRE(o.has_value());
  CHECK(o->k_opt == 3);
  CHECK(o->tau_opt == doctest::Approx(std::numbers::pi / 2.0));
  CHECK_FALSE(optimal_sensing_time(1.0, 0.0).has_value());
  CHECK_THROWS(optimal_sensing_time(0.0, 0.1));
}

TEST_CASE("sensitivity curves respect the standard quantum limit") {
  SensorParams est = fig3();
  const EffectiveParams ep{1.0, 0.2, 1};
  for (double t = 0.05; t < 6.0; t += 0.05) {
    const double sql = standard_quantum_limit(t, 100.0);
    for (auto m : {SensitivityModel::naive, SensitivityModel::proposed_reduced, SensitivityModel::proposed_full})
      CHECK(min_detectable_signal(m, est, ep, t, 100.0) >= sql * (1.0 - 1e-12));
  }
  // The two reduced curves differ by the constant slope of omega_eff.
  const double ratio = min_detectable_signal(SensitivityModel::naive, est, ep, 1.0, 1.0) /
                       min_detectable_signal(SensitivityModel::proposed_reduced, est, ep, 1.0, 1.0);
  CHECK(ratio == doctest::Approx(1.0 - 2.0 * 0.2 / 16.6));
  CHECK(std::isinf(min_detectable_signal(SensitivityModel::naive, est, ep, 0.0, 1.0)));
}
