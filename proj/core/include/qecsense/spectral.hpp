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

#include <vector>

#include "qecsense/lindblad.hpp"

namespace qecsense {

enum class Window { rect, hann };

struct Spectrum {
  std::vector<double> freqs;  // angular frequencies of the padded DFT bins
  std::vector<double> magnitudes;
  double peak_freq = 0.0;
  double peak_uncertainty = 0.0;  // half of the padded bin width
  double bin_width = 0.0;         // unpadded DFT resolution 2 pi / (n dt)
};

// Mean-subtracted magnitude spectrum with three-point log-magnitude peak
// interpolation. Throws std::invalid_argument for non-uniform grids or fewer
// than 64 samples.
Spectrum spectrum(const std::vector<double>& taus, const std::vector<double>& values,
                  int zero_pad_factor = 8, Window window = Window::rect);
Spectrum spectrum(const ExpectationTrace& trace, int zero_pad_factor = 8, Window window = Window::rect);

struct SweepOptions {
  double dt = 0.01;
  double initial_duration = 20.0;
  double target_uncertainty = 0.002;  // spectrum peak_uncertainty as a fraction of omega
  std::size_t max_samples = 1'000'000;
  int zero_pad_factor = 8;
  unsigned workers = 1;
};

struct SweepPoint {
  double gamma_qec;
  double omega_eff_measured;
  double uncertainty;  // on omega_eff
  double duration;
};

// FFT peak of the closed-form trace divided by 3 for each gamma_qec, doubling
// the trace length until the uncertainty target or the sample cap is met.
std::vector<SweepPoint> effective_frequency_sweep(const SensorParams& p_base,
                                                  const std::vector<double>& gamma_qec_values,
                                                  const SweepOptions& opt = {});

}  // namespace qecsense
