// Copyright 2026 The rshd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rshd/sanitizer/laplace.h"

#include <cmath>
#include <random>
#include <string>

#include "rshd/common/error.h"

namespace rshd {

double LaplaceSample(double scale, Rng& rng) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    ThrowContract("laplace: scale must be positive and finite, got " +
                  std::to_string(scale));
  }
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  double u = 0.0;
  do {
    u = unit(rng);
  } while (u == -0.5);  // 1 - 2|u| would be 0
  const double sign = u < 0.0 ? -1.0 : (u > 0.0 ? 1.0 : 0.0);
  return -scale * sign * std::log(1.0 - 2.0 * std::abs(u));
}

double LaplaceCdf(double x, double scale) {
  return x < 0.0 ? 0.5 * std::exp(x / scale) : 1.0 - 0.5 * std::exp(-x / scale);
}

double LaplaceScaleFor(double clip_bound, double eps_priv) {
  if (!(clip_bound > 0.0)) ThrowConfig("sanitizer: clip_bound must be positive");
  if (!(eps_priv > 0.0)) ThrowConfig("sanitizer: epsilon must be positive");
  return 2.0 * clip_bound / eps_priv;
}

}  // namespace rshd
