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

#ifndef RSHD_EVAL_PSE_QUALITY_H_
#define RSHD_EVAL_PSE_QUALITY_H_

#include <cstddef>
#include <functional>

#include "rshd/models/pse.h"
#include "rshd/saliency/smoothgrad.h"

namespace rshd {

struct PseQuality {
  double k_percent = 0.0;
  // Mean over pairs of Jaccard(top-k of estimate, top-k of true saliency).
  double mean_jaccard = 0.0;
  // Expected Jaccard of two independent uniform masks of the same sizes.
  double chance_jaccard = 0.0;
  // Mean over pairs of the per-entry mean |estimate - saliency|.
  double mean_l1 = 0.0;
  std::size_t count = 0;
};

using SaliencyEstimator = std::function<Matrix(const FeatureMatrix&)>;

PseQuality EvalPseQuality(const SaliencyEstimator& estimator,
                          const SaliencyDataset& dataset, double k_percent);
PseQuality EvalPseQuality(const PseModel& pse, const SaliencyDataset& dataset,
                          double k_percent);

// E[|A n B| / |A u B|] for independent uniform m-subsets A, B of n items
// (hypergeometric overlap). 1 when m is 0 or n.
double ChanceJaccard(std::size_t n, std::size_t m);

}  // namespace rshd

#endif  // RSHD_EVAL_PSE_QUALITY_H_
