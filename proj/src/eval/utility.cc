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

#include "rshd/eval/utility.h"

#include <string>
#include <vector>

#include "rshd/common/error.h"
#include "rshd/common/parallel.h"

namespace rshd {

double EvalUtility(const ClassifierModel& classifier,
                   std::span<const LabeledFeatures> data, const SanitizeFn& sanitize) {
  if (data.empty()) ThrowContract("eval_utility: empty dataset");
  for (const LabeledFeatures& ex : data) {
    if (ex.label >= classifier.config().num_classes) {
      ThrowContract("eval_utility: label " + std::to_string(ex.label) +
                    " outside the classifier's " +
                    std::to_string(classifier.config().num_classes) + " classes");
    }
  }
  std::vector<char> correct(data.size(), 0);
  ParallelFor(data.size(), [&](std::size_t i) {
    const FeatureMatrix x = sanitize ? sanitize(*data[i].x, i) : *data[i].x;
    correct[i] = classifier.Predict(x) == data[i].label;
  });
  std::size_t hits = 0;
  for (char c : correct) hits += static_cast<std::size_t>(c);
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace rshd
