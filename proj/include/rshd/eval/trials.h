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

#ifndef RSHD_EVAL_TRIALS_H_
#define RSHD_EVAL_TRIALS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rshd/eval/eer.h"
#include "rshd/models/embedder.h"
#include "rshd/tensor/matrix.h"

namespace rshd {

// a and b index the evaluation utterance list; a != b.
struct VerificationTrial {
  std::size_t a = 0;
  std::size_t b = 0;
  bool is_genuine = false;
};

// ceil(n/2) genuine and floor(n/2) impostor trials. Genuine: a uniformly
// chosen speaker, two distinct utterances. Impostor: two distinct speakers,
// one utterance each. Needs >= 2 speakers, each with >= 2 utterances.
std::vector<VerificationTrial> MakeTrials(std::span<const std::size_t> speakers,
                                          std::size_t n_trials, std::uint64_t seed);

// Clamped to [-1, 1]. Zero vectors are a numeric error.
double CosineSimilarity(std::span<const double> a, std::span<const double> b);

double ScoreTrial(const EmbedderModel& embedder, const FeatureMatrix& a,
                  const FeatureMatrix& b);

// EER of cosine scores over precomputed unit embeddings (one per utterance).
EerResult VerificationEer(std::span<const VerificationTrial> trials,
                          std::span<const std::vector<double>> embeddings);

}  // namespace rshd

#endif  // RSHD_EVAL_TRIALS_H_
