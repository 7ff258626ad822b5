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

#include "rshd/eval/trials.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "rshd/common/error.h"
#include "rshd/common/rng.h"

namespace rshd {
namespace {

constexpr std::uint64_t kTrialTag = 41;

}  // namespace

std::vector<VerificationTrial> MakeTrials(std::span<const std::size_t> speakers,
                                          std::size_t n_trials, std::uint64_t seed) {
  std::map<std::size_t, std::vector<std::size_t>> by_speaker;
  for (std::size_t i = 0; i < speakers.size(); ++i) by_speaker[speakers[i]].push_back(i);
  if (by_speaker.size() < 2) ThrowContract("make_trials: need at least 2 speakers");
  std::vector<const std::vector<std::size_t>*> groups;
  for (const auto& [s, members] : by_speaker) {
    if (members.size() < 2) {
      ThrowContract("make_trials: speaker " + std::to_string(s) +
                    " has fewer than 2 utterances");
    }
    groups.push_back(&members);
  }
  Rng rng = MakeStream(seed, 0, kTrialTag);
  std::uniform_int_distribution<std::size_t> pick_speaker(0, groups.size() - 1);
  auto pick_from = [&](const std::vector<std::size_t>& members) {
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    return members[pick(rng)];
  };
  const std::size_t n_genuine = n_trials - n_trials / 2;
  std::vector<VerificationTrial> trials;
  trials.reserve(n_trials);
  for (std::size_t i = 0; i < n_trials; ++i) {
    VerificationTrial trial;
    if (i < n_genuine) {
      const auto& members = *groups[pick_speaker(rng)];
      trial.a = pick_from(members);
      do {
        trial.b = pick_from(members);
      } while (trial.b == trial.a);
      trial.is_genuine = true;
    } else {
      const std::size_t sa = pick_speaker(rng);
      std::size_t sb = pick_speaker(rng);
      while (sb == sa) sb = pick_speaker(rng);
      trial.a = pick_from(*groups[sa]);
      trial.b = pick_from(*groups[sb]);
    }
    trials.push_back(trial);
  }
  return trials;
}

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) ThrowDimension("cosine", 1, a.size(), 1, b.size());
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (!(na > 0.0) || !(nb > 0.0)) ThrowNumeric("cosine: zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double ScoreTrial(const EmbedderModel& embedder, const FeatureMatrix& a,
                  const FeatureMatrix& b) {
  return CosineSimilarity(embedder.Embed(a), embedder.Embed(b));
}

EerResult VerificationEer(std::span<const VerificationTrial> trials,
                          std::span<const std::vector<double>> embeddings) {
  std::vector<double> genuine, impostor;
  for (const VerificationTrial& t : trials) {
    if (t.a >= embeddings.size() || t.b >= embeddings.size()) {
      ThrowContract("verification: trial refers to a missing utterance");
    }
    const double score = CosineSimilarity(embeddings[t.a], embeddings[t.b]);
    (t.is_genuine ? genuine : impostor).push_back(score);
  }
  return ComputeEer(genuine, impostor);
}

}  // namespace rshd
