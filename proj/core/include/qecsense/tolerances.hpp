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

namespace qecsense {

// Numerical audit thresholds shared by every module.
struct Tolerances {
  double construction = 1e-12;  // Hermiticity / unit trace on construction
  double psd = 1e-10;           // smallest admissible eigenvalue is -psd
  double integration = 1e-8;    // trace/Hermiticity after ODE integration
  double commutator = 1e-10;    // biasedness and binomial-form checks
  double shot_clip = 1e-9;      // model values clipped silently-with-flag
  double shot_reject = 1e-3;    // model values rejected outright
};

inline constexpr Tolerances kTol{};

}  // namespace qecsense
