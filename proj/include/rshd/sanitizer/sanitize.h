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

#ifndef RSHD_SANITIZER_SANITIZE_H_
#define RSHD_SANITIZER_SANITIZE_H_

#include <cstdint>
#include <string_view>

#include "rshd/models/pse.h"
#include "rshd/sanitizer/mask.h"
#include "rshd/tensor/matrix.h"

namespace rshd {

enum class SelectionMode { kPse, kRandom };

std::string_view ModeName(SelectionMode mode);
SelectionMode ParseMode(std::string_view name);

struct SanitizerConfig {
  double k_percent = 20.0;
  double eps_priv = 1.0;
  double clip_bound = 1.0;
  std::uint64_t seed = 0;
  SelectionMode mode = SelectionMode::kPse;

  void Validate() const;
};

// Unselected entries are copied bit-exactly. Each selected entry becomes
// clamp(x, -clip_bound, clip_bound) + Laplace(2 * clip_bound / eps_priv),
// without clipping again afterwards.
//
// One Laplace draw is taken per position in row-major order from stream
// (cfg.seed, stream) whether or not the position is selected, so at a fixed
// seed the noise at a position does not depend on k or on the mask.
FeatureMatrix Sanitize(const FeatureMatrix& x, const PerturbationMask& mask,
                       const SanitizerConfig& cfg, std::uint64_t stream = 0);

// Inference-time mask: top-k of the PSE estimate, or a random mask seeded by
// (cfg.seed, stream). Takes no speaker label.
PerturbationMask SelectPositions(const FeatureMatrix& x, const PseModel* pse,
                                 const SanitizerConfig& cfg, std::uint64_t stream = 0);

// Same as SelectPositions for pse mode, with a precomputed estimate.
PerturbationMask SelectFromEstimate(const Matrix& estimate, const SanitizerConfig& cfg,
                                    std::uint64_t stream = 0);

// Estimate (pse mode) or draw (random mode) the mask, then Sanitize. `pse`
// may be null in random mode.
FeatureMatrix SanitizePipeline(const FeatureMatrix& x, const PseModel* pse,
                               const SanitizerConfig& cfg, std::uint64_t stream = 0);

}  // namespace rshd

#endif  // RSHD_SANITIZER_SANITIZE_H_
