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

#include "rshd/eval/eer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "rshd/common/error.h"

namespace rshd {

EerResult ComputeEer(std::span<const double> genuine,
                     std::span<const double> impostor) {
  if (genuine.empty() || impostor.empty()) {
    ThrowContract("compute_eer: genuine and impostor scores must be non-empty");
  }
  std::vector<double> g(genuine.begin(), genuine.end());
  std::vector<double> im(impostor.begin(), impostor.end());
  for (double v : g) {
    if (!std::isfinite(v)) ThrowNumeric("compute_eer: non-finite genuine score");
  }
  for (double v : im) {
    if (!std::isfinite(v)) ThrowNumeric("compute_eer: non-finite impostor score");
  }
  std::sort(g.begin(), g.end());
  std::sort(im.begin(), im.end());
  std::vector<double> pooled(g);
  pooled.insert(pooled.end(), im.begin(), im.end());
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // (reported threshold, cut). Scores below the cut fall below the midpoint;
  // cutting at the upper score keeps that exact even when the midpoint of
  // two adjacent doubles rounds onto the lower one.
  std::vector<std::pair<double, double>> thresholds;
  thresholds.reserve(pooled.size() + 1);
  thresholds.emplace_back(-kInf, -kInf);
  for (std::size_t i = 0; i + 1 < pooled.size(); ++i) {
    thresholds.emplace_back(pooled[i] + (pooled[i + 1] - pooled[i]) / 2.0,
                            pooled[i + 1]);
  }
  thresholds.emplace_back(kInf, kInf);

  const double ng = static_cast<double>(g.size());
  const double ni = static_cast<double>(im.size());
  EerResult best;
  double best_gap = kInf;
  // Thresholds ascend, so both counts move monotonically.
  std::size_t genuine_below = 0, impostor_below = 0;
  for (const auto& [th, cut] : thresholds) {
    while (genuine_below < g.size() && g[genuine_below] < cut) ++genuine_below;
    while (impostor_below < im.size() && im[impostor_below] < cut) ++impostor_below;
    const double frr = static_cast<double>(genuine_below) / ng;
    const double far = static_cast<double>(im.size() - impostor_below) / ni;
    const double gap = std::abs(far - frr);
    if (gap < best_gap) {
      best_gap = gap;
      best = {(far + frr) / 2.0, th, far, frr};
    }
  }
  return best;
}

}  // namespace rshd
