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

#ifndef RSHD_EVAL_SWEEP_H_
#define RSHD_EVAL_SWEEP_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rshd/eval/trials.h"
#include "rshd/models/embedder.h"
#include "rshd/models/pooled.h"
#include "rshd/models/pse.h"
#include "rshd/sanitizer/sanitize.h"
#include "rshd/synth/synthbench.h"

namespace rshd {

struct SweepSpec {
  std::vector<double> k_list = {20, 40, 60, 80, 100};
  std::vector<double> eps_list = {0.5, 1, 2, 4, 8};
  std::vector<SelectionMode> modes = {SelectionMode::kPse, SelectionMode::kRandom};
  double clip_bound = 1.0;
  // Noise and random-mask seed. Every cell uses it, so cells differ only in
  // (k, eps, mode).
  std::uint64_t seed = 0;
  std::size_t n_trials = 4000;
  std::uint64_t trial_seed = 0;

  void Validate() const;
};

// Frozen evaluators and the estimator. `pse` may be null when no cell uses
// pse mode. The classifier scores the utterances' content labels.
struct SweepModels {
  const PseModel* pse = nullptr;
  const EmbedderModel* embedder = nullptr;
  const ClassifierModel* classifier = nullptr;
  std::string task_name = "content";
};

struct SweepRow {
  double k_percent = 0.0;
  double epsilon = 0.0;
  SelectionMode mode = SelectionMode::kPse;
  double eer = 0.0;
  double task_accuracy = 0.0;
};

struct SweepGrid {
  std::string task_name = "content";
  std::vector<SweepRow> rows;
  double clean_eer = 0.0;
  double clean_accuracy = 0.0;
  std::map<std::string, std::string> provenance;

  // Header "k_percent,epsilon,mode,eer,task_acc_<task>", then one row per
  // cell with numbers in 6-decimal fixed point.
  std::string ToCsv() const;
};

// Evaluation context shared by every cell: trials over the evaluation
// speakers and cached PSE estimates.
class SweepRunner {
 public:
  SweepRunner(const SweepModels& models, std::span<const Utterance> eval,
              std::size_t n_trials, std::uint64_t trial_seed);

  // Sanitizes each utterance with `cfg` (utterance i uses stream i) and scores
  // verification EER and task accuracy. cfg.k_percent == 0 gives clean scores.
  SweepRow Evaluate(const SanitizerConfig& cfg) const;

  std::size_t num_trials() const { return trials_.size(); }

 private:
  SweepModels models_;
  std::span<const Utterance> eval_;
  std::vector<VerificationTrial> trials_;
  std::vector<Matrix> estimates_;
};

// Full (k, eps, mode) grid in k-major, then eps, then mode order.
SweepGrid RunSweep(const SweepSpec& spec, const SweepModels& models,
                   std::span<const Utterance> eval);

}  // namespace rshd

#endif  // RSHD_EVAL_SWEEP_H_
