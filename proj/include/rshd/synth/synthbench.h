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

#ifndef RSHD_SYNTH_SYNTHBENCH_H_
#define RSHD_SYNTH_SYNTHBENCH_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rshd/sanitizer/mask.h"
#include "rshd/tensor/matrix.h"

namespace rshd {

// Synthetic stand-in for encoder features. Speaker identity lives in a fixed
// set of columns, task content in a disjoint set, everything else is noise.
struct SynthConfig {
  std::size_t n_speakers = 20;
  std::size_t utterances_per_speaker = 40;
  std::size_t t_min = 8;
  std::size_t t_max = 24;
  std::size_t d = 32;
  std::vector<std::size_t> identity_positions = {1, 6, 11, 17, 22, 27};
  std::vector<std::size_t> content_positions = {3, 9, 14, 19, 25, 30};
  std::size_t n_content_classes = 4;
  double identity_strength = 1.0;
  double content_strength = 1.0;
  double noise_floor = 1.0;
  // Speaker-disjoint share of speakers used for SID training / saliency.
  double sid_speaker_fraction = 0.4;
  // Utterance share of each verification speaker used to train evaluators.
  double asv_train_fraction = 0.5;
  std::uint64_t seed = 0;

  void Validate() const;
};

enum class Partition { kSid, kAsvTrain, kAsvEval };

std::string_view PartitionName(Partition partition);
Partition ParsePartition(std::string_view name);

struct Utterance {
  std::string id;
  FeatureMatrix features;
  std::size_t speaker = 0;
  std::size_t content = 0;
  Partition partition = Partition::kSid;
};

// Per-column affine map fitted on the SID partition and applied everywhere.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> stddev;

  static Standardization Fit(std::span<const Utterance> utterances,
                             Partition fit_on);
  void Apply(FeatureMatrix& x) const;
};

struct SynthDataset {
  SynthConfig config;
  Standardization standardization;
  std::vector<Utterance> utterances;

  std::vector<const Utterance*> InPartition(Partition partition) const;
};

// Utterance x with t ~ U{t_min..t_max} frames: N(0, noise_floor^2) entries,
// plus identity_strength * (speaker signature) on identity columns and
// content_strength * (class signature) on content columns, each signature
// fixed across frames. Then partitioned and standardized.
SynthDataset Generate(const SynthConfig& cfg);

// True on every frame of each identity column.
PerturbationMask OracleSensitiveMask(const SynthConfig& cfg, std::size_t t,
                                     std::size_t d);
PerturbationMask ContentMask(const SynthConfig& cfg, std::size_t t, std::size_t d);

enum class SplitMode { kSpeakerDisjoint, kUtterance };

// Index partitions of `speakers` (one label per utterance). Fractions must
// sum to 1. Speaker-disjoint mode assigns whole speakers; utterance mode
// splits each speaker's utterances, keeping every speaker in every partition
// when it has enough utterances.
std::vector<std::vector<std::size_t>> Split(std::span<const std::size_t> speakers,
                                            std::span<const double> fractions,
                                            SplitMode mode, std::uint64_t seed);

}  // namespace rshd

#endif  // RSHD_SYNTH_SYNTHBENCH_H_
