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

#include "rshd/sanitizer/sanitize.h"

#include <algorithm>
#include <string>

#include "rshd/common/error.h"
#include "rshd/common/rng.h"
#include "rshd/sanitizer/laplace.h"

namespace rshd {
namespace {

constexpr std::uint64_t kNoiseTag = 11;
constexpr std::uint64_t kRandomMaskTag = 12;

}  // namespace

std::string_view ModeName(SelectionMode mode) {
  return mode == SelectionMode::kPse ? "pse" : "random";
}

SelectionMode ParseMode(std::string_view name) {
  if (name == "pse") return SelectionMode::kPse;
  if (name == "random") return SelectionMode::kRandom;
  ThrowConfig("unknown selection mode '" + std::string(name) + "' (pse|random)");
}

void SanitizerConfig::Validate() const {
  if (!(k_percent >= 0.0 && k_percent <= 100.0)) {
    ThrowConfig("sanitizer: k must lie in [0, 100]");
  }
  LaplaceScaleFor(clip_bound, eps_priv);
}

FeatureMatrix Sanitize(const FeatureMatrix& x, const PerturbationMask& mask,
                       const SanitizerConfig& cfg, std::uint64_t stream) {
  if (mask.rows() != x.rows() || mask.cols() != x.cols()) {
    ThrowDimension("sanitize", x.rows(), x.cols(), mask.rows(), mask.cols());
  }
  const double scale = LaplaceScaleFor(cfg.clip_bound, cfg.eps_priv);
  FeatureMatrix out = x;
  if (mask.count_selected() == 0) return out;
  Rng rng = MakeStream(cfg.seed, stream, kNoiseTag);
  auto values = out.data();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double noise = LaplaceSample(scale, rng);
    if (mask.at(i)) {
      values[i] = std::clamp(values[i], -cfg.clip_bound, cfg.clip_bound) + noise;
    }
  }
  return out;
}

PerturbationMask SelectFromEstimate(const Matrix& estimate, const SanitizerConfig& cfg,
                                    std::uint64_t stream) {
  if (cfg.mode == SelectionMode::kRandom) {
    const std::uint64_t mask_seed =
        MakeStream(cfg.seed, stream, kRandomMaskTag)();
    return SelectRandom(estimate.rows(), estimate.cols(), cfg.k_percent, mask_seed);
  }
  return SelectTopK(estimate, cfg.k_percent);
}

PerturbationMask SelectPositions(const FeatureMatrix& x, const PseModel* pse,
                                 const SanitizerConfig& cfg, std::uint64_t stream) {
  if (cfg.mode == SelectionMode::kRandom) {
    const std::uint64_t mask_seed =
        MakeStream(cfg.seed, stream, kRandomMaskTag)();
    return SelectRandom(x.rows(), x.cols(), cfg.k_percent, mask_seed);
  }
  if (pse == nullptr) ThrowConfig("sanitize: pse mode needs a PSE checkpoint");
  return SelectTopK(pse->Estimate(x), cfg.k_percent);
}

FeatureMatrix SanitizePipeline(const FeatureMatrix& x, const PseModel* pse,
                               const SanitizerConfig& cfg, std::uint64_t stream) {
  cfg.Validate();
  if (cfg.k_percent == 0.0) return x;
  return Sanitize(x, SelectPositions(x, pse, cfg, stream), cfg, stream);
}

}  // namespace rshd
