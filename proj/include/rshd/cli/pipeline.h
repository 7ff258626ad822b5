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

#ifndef RSHD_CLI_PIPELINE_H_
#define RSHD_CLI_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>

#include "json.hpp"
#include "rshd/eval/sweep.h"
#include "rshd/models/embedder.h"
#include "rshd/models/pse.h"
#include "rshd/models/train.h"
#include "rshd/saliency/smoothgrad.h"
#include "rshd/sanitizer/sanitize.h"
#include "rshd/synth/synthbench.h"

// One function per pipeline stage. Each reads its inputs from disk, writes
// its outputs, and returns a JSON summary. Artifacts reference their inputs
// by digest, never by path, so identical runs in different directories
// produce identical bytes.
namespace rshd {

namespace fs = std::filesystem;

struct GenDataOptions {
  SynthConfig synth;
  fs::path out;
  bool force = false;
};
nlohmann::json GenData(const GenDataOptions& o);

// Trains on the sid partition. Labels are the rank of each speaker among
// the sorted sid speakers; the checkpoint records that speaker list.
struct TrainSidOptions {
  fs::path data;
  TrainConfig train = SidTrainDefaults();
  fs::path out;
  bool force = false;
};
nlohmann::json TrainSidStage(const TrainSidOptions& o);

struct BuildSaliencyOptions {
  fs::path data;
  fs::path sid;
  SmoothGradConfig smoothgrad;
  fs::path out;
  bool force = false;
};
nlohmann::json BuildSaliencyStage(const BuildSaliencyOptions& o);

// arch.input_dim is taken from the data.
struct TrainPseOptions {
  fs::path saliency;
  PseConfig arch;
  TrainConfig train = PseTrainDefaults();
  fs::path out;
  bool force = false;
};
nlohmann::json TrainPseStage(const TrainPseOptions& o);

// Trains on the asv-train partition. When `sid` is set, the embedder's
// speakers must be disjoint from those the SID checkpoint was trained on.
struct TrainEmbedderOptions {
  fs::path data;
  std::optional<fs::path> sid;
  EmbedderConfig arch;
  TrainConfig train = EmbedderTrainDefaults();
  fs::path out;
  bool force = false;
};
nlohmann::json TrainEmbedderStage(const TrainEmbedderOptions& o);

// Content-label classifier on the asv-train partition.
struct TrainClassifierOptions {
  fs::path data;
  TrainConfig train = ClassifierTrainDefaults();
  fs::path out;
  bool force = false;
};
nlohmann::json TrainClassifierStage(const TrainClassifierOptions& o);

// Record i of the input manifest uses noise stream i. Without a partition
// every record is sanitized.
struct SanitizeOptions {
  fs::path data;
  std::optional<fs::path> pse;
  SanitizerConfig sanitizer;
  std::optional<Partition> partition;
  fs::path out;
  bool force = false;
};
nlohmann::json SanitizeStage(const SanitizeOptions& o);

// Verification EER and content accuracy on one partition (asv-eval by
// default; all records if the manifest has no partitions). `out`, when set,
// receives the summary as JSON.
struct EvaluateOptions {
  fs::path data;
  fs::path embedder;
  fs::path classifier;
  std::optional<Partition> partition;
  std::size_t n_trials = 4000;
  std::uint64_t trial_seed = 0;
  std::optional<fs::path> out;
  bool force = false;
};
nlohmann::json EvaluateStage(const EvaluateOptions& o);

// Writes the grid CSV to `out` and its provenance to `out` + ".provenance.json".
struct SweepOptions {
  fs::path data;
  fs::path pse;
  fs::path embedder;
  fs::path classifier;
  SweepSpec spec;
  fs::path out;
  bool force = false;
};
nlohmann::json SweepStage(const SweepOptions& o);

fs::path ProvenancePath(const fs::path& csv);

// gen-data through sweep with default settings under `dir`:
// data/, sid.ckpt, saliency/, pse.ckpt, embedder.ckpt, classifier.ckpt,
// sweep.csv. Returns the per-stage summaries.
nlohmann::json RunDefaultPipeline(const fs::path& dir, std::uint64_t seed, bool force);

}  // namespace rshd

#endif  // RSHD_CLI_PIPELINE_H_
