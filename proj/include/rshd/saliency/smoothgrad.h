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

#ifndef RSHD_SALIENCY_SMOOTHGRAD_H_
#define RSHD_SALIENCY_SMOOTHGRAD_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rshd/models/pooled.h"
#include "rshd/tensor/matrix.h"

namespace rshd {

// Non-negative t x d privacy-risk scores for one utterance.
class SaliencyMap {
 public:
  SaliencyMap() = default;
  // Throws a data error if any entry is negative or non-finite.
  explicit SaliencyMap(Matrix values);

  const Matrix& values() const { return values_; }
  std::size_t rows() const { return values_.rows(); }
  std::size_t cols() const { return values_.cols(); }

 private:
  Matrix values_;
};

struct SmoothGradConfig {
  std::size_t n_samples = 25;
  // Std of the Gaussian input noise, in feature units. Features are
  // standardized, so this is also the fraction of the feature std.
  double sigma = 0.1;
  std::uint64_t seed = 0;

  void Validate() const;
};

// (1/n) * sum_j |d CE(M(x + e_j), label) / d(x + e_j)|, e_j ~ N(0, sigma^2),
// with the gradient taken at the noisy point. Noise comes from stream
// (cfg.seed, stream). With n = 1 and sigma = 0 this is exactly |grad|.
SaliencyMap SmoothGrad(const SidModel& model, const FeatureMatrix& x,
                       std::size_t label, const SmoothGradConfig& cfg,
                       std::uint64_t stream = 0);

struct SaliencyPair {
  std::string id;
  FeatureMatrix x;
  SaliencyMap saliency;
};

struct SaliencyProvenance {
  std::string sid_checkpoint;
  SmoothGradConfig smoothgrad;
};

struct SaliencyDataset {
  std::vector<SaliencyPair> pairs;
  SaliencyProvenance provenance;
};

struct LabeledFeatures {
  std::string id;
  const FeatureMatrix* x = nullptr;
  std::size_t label = 0;
};

// One pair per input, in input order. Utterance i uses noise stream i, so
// serial and parallel builds are identical. Errors name the sample index.
SaliencyDataset BuildSaliencyDataset(std::span<const LabeledFeatures> data,
                                     const SidModel& model,
                                     const SmoothGradConfig& cfg,
                                     std::string sid_checkpoint = {});

}  // namespace rshd

#endif  // RSHD_SALIENCY_SMOOTHGRAD_H_
