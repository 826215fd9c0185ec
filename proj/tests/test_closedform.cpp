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
#include <random>

#include "qecsense/closedform.hpp"
#include "qecsense/inference.hpp"
#include "qecsense/lindblad.hpp"

using namespace qecsense;

namespace {

SensorParams params(double g, double gq) {
  SensorParams p;
  p.gamma_err = g;
  p.gamma_qec = gq;
  return p;
}

struct Point {
  double gamma_err, gamma_qec, tau, value;
};

// 2 Re q from the matrix exponential of the projected (q, e) block.
const Point kBlock[] = {
    {0.1, 5.0, 0.5, 0.085048730567935382},   {0.1, 5.0, 2.0, 0.80027734960710295},
    {0.1, 5.0, 7.3, -0.51960684464469487},   {0.1, 5.0, 15.0, 0.47597986958034066},
    {0.2, 16.6, 0.5, 0.092004644050256851},  {0.2, 16.6, 2.0, 0.85338133840397712},
    {0.2, 16.6, 7.3, -0.70563921788784201},  {0.2, 16.6, 15.0, 0.71003706352264417},
    {0.05, 1.0, 0.5, 0.071216289194914517},  {0.05, 1.0, 2.0, 0.75189175202948844},
    {0.05, 1.0, 7.3, -0.37705068724949159},  {0.05, 1.0, 15.0, 0.17730361628920954},
    {0.3, 2.0, 0.5, 0.087906814974921588},   {0.3, 2.0, 2.0, 0.31541037956564577},
    {0.3, 2.0, 7.3, 0.069332674546527029},   {0.3, 2.0, 15.0, -0.002884751848263574},
};

// Dominant eigenvalue of the same block, written as -3 gamma_eff - 3 i omega_eff.
struct SlowMode {
  double gamma_err, gamma_qec, omega_eff, gamma_eff, knee;
};
const SlowMode kEigen[] = {
    {0.1, 5.0, 0.96890594360818838, 0.014267550127654868, 23.36303922894454},
    {0.2, 16.6, 0.97824926318555594, 0.0068664964209141366, 48.544892897352838},
    {0.1, 50.0, 0.99606890334835985, 0.00054973793233218749, 606.34952352516871},
};

double rmse_simplified(const SensorParams& p, int order) {
  const auto taus = uniform_grid(0.0, 20.0, 2000);
  double s = 0.0;
  for (double t : taus) {
    const double d = expectation_full(p, t) - expectation_simplified(p, t, order).value;
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(taus.size()));
}

}  // namespace

TEST_CASE("closed form matches the projected block") {
  for (const auto& pt : kBlock) {
    CAPTURE(pt.tau);
    CHECK(std::abs(expectation_full(params(pt.gamma_err, pt.gamma_qec), pt.tau) - pt.value) < 1e-12);
  }
}

TEST_CASE("closed form boundary values") {
  const auto p = params(0.1, 5.0);
  CHECK(expectation_full(p, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  const auto es = eigen_solution(p);
  CHECK(std::abs(es.c_plus - es.c_minus - 0.5) < 1e-15);
  CHECK(es.lambda_plus.real() > es.lambda_minus.real());
  CHECK(expectation_full(params(0.0, 0.0), 1.3) == doctest::Approx(std::cos(3.9)).epsilon(1e-14));
}

TEST_CASE("slow eigenvalue and decoherence knee") {
  for (const auto& e : kEigen) {
    const auto p = params(e.gamma_err, e.gamma_qec);
    const auto es = eigen_solution(p);
    CHECK(-es.lambda_plus.imag() / 3.0 == doctest::Approx(e.omega_eff).epsilon(1e-12));
    CHECK(-es.lambda_plus.real() / 3.0 == doctest::Approx(e.gamma_eff).epsilon(1e-10));
    CHECK(decoherence_knee(p) == doctest::Approx(e.knee).epsilon(1e-10));
  }
}

TEST_CASE("effective parameters converge with the expansion order") {
  const auto p = params(0.1, 5.0);
  const auto o1 = effective_params(p, 1);
  CHECK(o1.omega_eff == doctest::Approx(0.96));
  CHECK(o1.gamma_eff == doctest::Approx(0.004));
  const auto o3 = effective_params(p, 3);
  CHECK(o3.omega_eff == doctest::Approx(0.971672).epsilon(1e-6));
  CHECK(o3.gamma_eff == doctest::Approx(0.0141472).epsilon(1e-5));
  for (const auto& e : kEigen) {
    const auto q = params(e.gamma_err, e.gamma_qec);
    CHECK(std::abs(effective_params(q, 3).omega_eff - e.omega_eff) <
          std::abs(effective_params(q, 1).omega_eff - e.omega_eff));
  }
  CHECK_THROWS(effective_params(p, 4));
  CHECK_THROWS(effective_params(params(0.1, 0.0), 1));
}

TEST_CASE("reduced form accuracy") {
  // At the Fig. 1 rates the expansion is loose; the orders still rank correctly.
  const auto fig1 = params(0.1, 5.0);
  CHECK(rmse_simplified(fig1, 3) < rmse_simplified(fig1, 1));
  CHECK(rmse_simplified(fig1, 1) == doctest::Approx(0.216).epsilon(0.01));
  const auto strong = params(0.1, 50.0);
  CHECK(rmse_simplified(strong, 1) < 0.1);
  CHECK(rmse_simplified(strong, 3) < 0.005);
}

TEST_CASE("validity region") {
  CHECK(validity_check(params(0.1, 5.0)).valid);
  CHECK_FALSE(validity_check(params(0.1, 0.1)).valid);
  CHECK(expectation_simplified(params(0.1, 0.1), 1.0).outside_validity);
  CHECK_FALSE(expectation_simplified(params(0.1, 5.0), 1.0).outside_validity);
  // One sign change of the margin along gamma_qec at fixed gamma_err.
  for (double g : {0.05, 0.1, 0.2, 0.3}) {
    int flips = 0;
    double prev = validity_check(params(g, 0.01)).margin;
    for (int i = 1; i <= 4000; ++i) {
      const double gq = 0.01 * std::pow(1e4, i / 4000.0);
      const double m = validity_check(params(g, gq)).margin;
      flips += (m < 0.0) != (prev < 0.0);
      prev = m;
    }
    CAPTURE(g);
    CHECK(flips == 1);
  }
}

TEST_CASE("uncorrected closed form") {
  const auto p = params(0.1, 0.0);
  const auto taus = uniform_grid(0.0, 20.0, 201);
  const auto tr = ramsey_trace(p, taus);
  double err = 0.0;
  for (std::size_t i = 0; i < taus.size(); ++i)
    err = std::max(err, std::abs(tr.values[i] - expectation_uncorrected(p, taus[i])));
  CHECK(err < 1e-8);
  CHECK(3.0 * uncorrected_frequency(p) == doctest::Approx(2.985));
  CHECK_THROWS_AS(expectation_uncorrected(params(1.0, 0.0), 1.0), std::domain_error);
}

TEST_CASE("analytic gradient against central differences") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> ug(0.02, 0.3), uq(3.0, 40.0), ut(0.1, 20.0);
  for (int i = 0; i < 40; ++i) {
    auto p = params(ug(rng), uq(rng));
    const double t = ut(rng);
    const auto g = expectation_full_gradient(p, t);
    const double h = 1e-6;
    auto pw = p, mw = p, pg = p, mg = p;
    pw.omega += h, mw.omega -= h, pg.gamma_err += h, mg.gamma_err -= h;
    const double fw = (expectation_full(pw, t) - expectation_full(mw, t)) / (2 * h);
    const double fg = (expectation_full(pg, t) - expectation_full(mg, t)) / (2 * h);
    CHECK(g.d_omega == doctest::Approx(fw).epsilon(1e-5));
    CHECK(g.d_gamma == doctest::Approx(fg).epsilon(1e-5));
  }
}

TEST_CASE("conjectured model") {
  const auto p = params(0.2, 16.6);
  CHECK(expectation_conjectured(p, 1.0) == doctest::Approx(std::exp(-0.6) * std::cos(3.0)));
}
