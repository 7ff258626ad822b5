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

#ifndef RSHD_EVAL_UTILITY_H_
#define RSHD_EVAL_UTILITY_H_

#include <cstddef>
#include <functional>
#include <span>

#include "rshd/models/pooled.h"
#include "rshd/saliency/smoothgrad.h"
#include "rshd/tensor/matrix.h"

namespace rshd {

// (features, index in the evaluation list) -> sanitized features.
using SanitizeFn =
    std::function<FeatureMatrix(const FeatureMatrix&, std::size_t index)>;

// Accuracy of a classifier trained on clean features when it is fed the
// sanitized features. The classifier is never updated here.
double EvalUtility(const ClassifierModel& classifier,
                   std::span<const LabeledFeatures> data, const SanitizeFn& sanitize);

}  // namespace rshd

#endif  // RSHD_EVAL_UTILITY_H_
