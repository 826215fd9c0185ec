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

#include "qecsense/spectral.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

#include "qecsense/closedform.hpp"
#include "qecsense/parallel.hpp"

namespace qecsense {

namespace {

// FFTW planning is not thread safe.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> magnitude_spectrum(const std::vector<double>& x, std::size_t n_fft) {
  double* in = fftw_alloc_real(n_fft);
  fftw_complex* out = fftw_alloc_complex(n_fft / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n_fft), in, out, FFTW_ESTIMATE);
  }
  std::fill(in, in + n_fft, 0.0);
  std::copy(x.begin(), x.end(), in);
  fftw_execute(plan);
  std::vector<double> mag(n_fft / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::hypot(out[k][0], out[k][1]);
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return mag;
}

}  // namespace

Spectrum spectrum(const std::vector<double>& taus, const std::vector<double>& values, int zero_pad_factor,
                  Window window) {
  const std::size_t n = taus.size();
  if (n != values.size()) throw std::invalid_argument("spectrum: size mismatch");
  if (n < 64) throw std::invalid_argument("spectrum: need at least 64 samples");
  if (zero_pad_factor < 1) throw std::invalid_argument("spectrum: zero_pad_factor must be >= 1");
  const double dt = (taus.back() - taus.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((taus[i] - taus[i - 1]) - dt) > 1e-6 * dt) {
      throw std::invalid_argument("spectrum: time grid is not uniform");
    }
  }

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double w = 1.0;
    if (window == Window::hann) {
      w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    x[i] = w * (values[i] - mean);
  }

  const std::size_t n_fft = n * static_cast<std::size_t>(zero_pad_factor);
  Spectrum s;
  s.magnitudes = magnitude_spectrum(x, n_fft);
  const double df = 2.0 * std::numbers::pi / (static_cast<double>(n_fft) * dt);
  s.freqs.resize(s.magnitudes.size());
  for (std::size_t k = 0; k < s.freqs.size(); ++k) s.freqs[k] = df * static_cast<double>(k);
  s.bin_width = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
  s.peak_uncertainty = 0.5 * df;

  std::size_t kmax = 1;
  for (std::size_t k = 1; k + 1 < s.magnitudes.size(); ++k) {
    if (s.magnitudes[k] > s.magnitudes[kmax]) kmax = k;
  }
  double shift = 0.0;
  if (kmax >= 1 && kmax + 1 < s.magnitudes.size()) {
    const double tiny = 1e-300;
    const double a = std::log(s.magnitudes[kmax - 1] + tiny);
    const double b = std::log(s.magnitudes[kmax] + tiny);
    const double c = std::log(s.magnitudes[kmax + 1] + tiny);
    const double den = a - 2.0 * b + c;
    if (den < 0.0) shift = std::clamp(0.5 * (a - c) / den, -0.5, 0.5);
  }
  s.peak_freq = df * (static_cast<double>(kmax) + shift);
  return s;
}

Spectrum spectrum(const ExpectationTrace& trace, int zero_pad_factor, Window window) {
  return spectrum(trace.taus, trace.values, zero_pad_factor, window);
}

std::vector<SweepPoint> effective_frequency_sweep(const SensorParams& p_base,
                                                  const std::vector<double>& gamma_qec_values,
                                                  const SweepOptions& opt) {
  std::vector<SweepPoint> out(gamma_qec_values.size());
  parallel_for(gamma_qec_values.size(), opt.workers, [&](std::size_t i) {
    SensorParams p = p_base;
    p.gamma_qec = gamma_qec_values[i];
    p.validate();
    double duration = opt.initial_duration;
    for (;;) {
      const auto n = static_cast<std::size_t>(std::llround(duration / opt.dt)) + 1;
      const auto taus = uniform_grid(0.0, duration, n);
      std::vector<double> vals(n);
      for (std::size_t k = 0; k < n; ++k) vals[k] = expectation_full(p, taus[k]);
      const Spectrum s = spectrum(taus, vals, opt.zero_pad_factor);
      const double unc = s.peak_uncertainty / 3.0;
      const bool at_cap = 2 * n > opt.max_samples;
      if (s.peak_uncertainty < opt.target_uncertainty * p.omega || at_cap) {
        out[i] = {p.gamma_qec, s.peak_freq / 3.0, unc, duration};
        return;
      }
      duration *= 2.0;
    }
  });
  return out;
}

}  // namespace qecsense
