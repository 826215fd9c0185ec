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

#include "qecsense/closedform.hpp"
#include "qecsense/lindblad.hpp"
#include "qecsense/spectral.hpp"

using namespace qecsense;

namespace {

std::vector<double> tone(const std::vector<double>& taus, double w, double decay = 0.0) {
  std::vector<double> v;
  for (double t : taus) v.push_back(std::exp(-decay * t) * std::cos(w * t));
  return v;
}

SensorParams params(double g, double gq) {
  SensorParams p;
  p.gamma_err = g;
  p.gamma_qec = gq;
  return p;
}

}  // namespace

TEST_CASE("peak of a pure tone") {
  const auto taus = uniform_grid(0.0, 20.0, 2000);
  for (double w : {1.3, 2.5, 3.0, 4.75}) {
    const auto s = spectrum(taus, tone(taus, w));
    CAPTURE(w);
    CHECK(std::abs(s.peak_freq - w) < s.peak_uncertainty);
    const auto h = spectrum(taus, tone(taus, w), 8, Window::hann);
    CHECK(std::abs(h.peak_freq - w) < h.peak_uncertainty);
  }
}

TEST_CASE("bin geometry") {
  const auto taus = uniform_grid(0.0, 20.0, 2000);
  const auto s = spectrum(taus, tone(taus, 3.0), 8);
  const double dt = taus[1] - taus[0];
  CHECK(s.bin_width == doctest::Approx(2.0 * std::numbers::pi / (2000 * dt)));
  CHECK(s.peak_uncertainty == doctest::Approx(s.bin_width / 16.0));
  CHECK(s.freqs.size() == s.magnitudes.size());
  CHECK(s.freqs.front() == 0.0);
}

TEST_CASE("input validation") {
  const auto few = uniform_grid(0.0, 1.0, 32);
  CHECK_THROWS(spectrum(few, tone(few, 3.0)));
  auto bent = uniform_grid(0.0, 10.0, 128);
  bent[50] += 0.01;
  CHECK_THROWS(spectrum(bent, tone(bent, 3.0)));
}

TEST_CASE("corrected peak sits below the ideal peak") {
  const auto taus = uniform_grid(0.0, 20.0, 2000);
  const auto p = params(0.1, 5.0);
  std::vector<double> full;
  for (double t : taus) full.push_back(expectation_full(p, t));
  const auto ideal = spectrum(taus, tone(taus, 3.0));
  const auto cor = spectrum(taus, full);
  CHECK(cor.peak_freq < ideal.peak_freq - ideal.peak_uncertainty);
  CHECK(std::abs(cor.peak_freq - 2.88) < 0.03);
  CHECK(std::abs(cor.peak_freq - 3.0 * effective_params(p, 3).omega_eff) < 0.03);
}

TEST_CASE("effective frequency sweep") {
  const auto pts = effective_frequency_sweep(params(0.1, 0.0), {1.5, 5.0, 100.0});
  REQUIRE(pts.size() == 3);
  for (const auto& pt : pts) CHECK(pt.uncertainty <= 0.002 / 3.0 + 1e-15);
  CHECK(pts[0].omega_eff_measured < pts[1].omega_eff_measured);
  CHECK(pts[1].omega_eff_measured == doctest::Approx(0.969).epsilon(1e-3));
  CHECK(std::abs(pts[2].omega_eff_measured - 1.0) < 0.005);
}
