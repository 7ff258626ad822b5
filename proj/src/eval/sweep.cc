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

#include "rshd/eval/sweep.h"

#include <cstdio>
#include <sstream>

#include "rshd/common/error.h"
#include "rshd/common/parallel.h"

namespace rshd {
namespace {

std::string Fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

void SweepSpec::Validate() const {
  if (k_list.empty() || eps_list.empty() || modes.empty()) {
    ThrowConfig("sweep: k, epsilon and mode lists must be non-empty");
  }
  for (double k : k_list) {
    if (!(k >= 0.0 && k <= 100.0)) ThrowConfig("sweep: k values must lie in [0, 100]");
  }
  for (double e : eps_list) {
    if (!(e > 0.0)) ThrowConfig("sweep: epsilon values must be positive");
  }
  if (!(clip_bound > 0.0)) ThrowConfig("sweep: clip_bound must be positive");
  if (n_trials < 2) ThrowConfig("sweep: need at least 2 trials");
}

std::string SweepGrid::ToCsv() const {
  std::ostringstream os;
  os << "k_percent,epsilon,mode,eer,task_acc_" << task_name << "\n";
  for (const SweepRow& row : rows) {
    os << Fixed6(row.k_percent) << ',' << Fixed6(row.epsilon) << ','
       << ModeName(row.mode) << ',' << Fixed6(row.eer) << ','
       << Fixed6(row.task_accuracy) << "\n";
  }
  return os.str();
}

SweepRunner::SweepRunner(const SweepModels& models, std::span<const Utterance> eval,
                         std::size_t n_trials, std::uint64_t trial_seed)
    : models_(models), eval_(eval) {
  if (models.embedder == nullptr) ThrowConfig("sweep: missing embedder checkpoint");
  if (models.classifier == nullptr) ThrowConfig("sweep: missing classifier checkpoint");
  if (eval.empty()) ThrowData("sweep: empty evaluation set");
  std::vector<std::size_t> speakers;
  for (const Utterance& u : eval) speakers.push_back(u.speaker);
  trials_ = MakeTrials(speakers, n_trials, trial_seed);
  if (models.pse != nullptr) {
    estimates_.resize(eval.size());
    ParallelFor(eval.size(), [&](std::size_t i) {
      estimates_[i] = models.pse->Estimate(eval[i].features);
    });
  }
}

SweepRow SweepRunner::Evaluate(const SanitizerConfig& cfg) const {
  cfg.Validate();
  if (cfg.mode == SelectionMode::kPse && cfg.k_percent > 0.0 && estimates_.empty()) {
    ThrowConfig("sweep: pse mode needs a PSE checkpoint");
  }
  std::vector<std::vector<double>> embeddings(eval_.size());
  std::vector<char> correct(eval_.size(), 0);
  ParallelFor(eval_.size(), [&](std::size_t i) {
    const FeatureMatrix& x = eval_[i].features;
    FeatureMatrix sanitized;
    if (cfg.k_percent > 0.0) {
      const Matrix& scores = estimates_.empty() ? x : estimates_[i];
      sanitized = Sanitize(x, SelectFromEstimate(scores, cfg, i), cfg, i);
    } else {
      sanitized = x;
    }
    embeddings[i] = models_.embedder->Embed(sanitized);
    correct[i] = models_.classifier->Predict(sanitized) == eval_[i].content;
  });
  std::size_t hits = 0;
  for (char c : correct) hits += static_cast<std::size_t>(c);
  SweepRow row;
  row.k_percent = cfg.k_percent;
  row.epsilon = cfg.eps_priv;
  row.mode = cfg.mode;
  row.eer = VerificationEer(trials_, embeddings).eer;
  row.task_accuracy = static_cast<double>(hits) / static_cast<double>(eval_.size());
  return row;
}

SweepGrid RunSweep(const SweepSpec& spec, const SweepModels& models,
                   std::span<const Utterance> eval) {
  spec.Validate();
  for (SelectionMode mode : spec.modes) {
    if (mode == SelectionMode::kPse && models.pse == nullptr) {
      ThrowConfig("sweep: pse mode needs a PSE checkpoint");
    }
  }
  const SweepRunner runner(models, eval, spec.n_trials, spec.trial_seed);
  SweepGrid grid;
  grid.task_name = models.task_name;
  SanitizerConfig clean;
  clean.k_percent = 0.0;
  clean.clip_bound = spec.clip_bound;
  const SweepRow clean_row = runner.Evaluate(clean);
  grid.clean_eer = clean_row.eer;
  grid.clean_accuracy = clean_row.task_accuracy;
  for (double k : spec.k_list) {
    for (double eps : spec.eps_list) {
      for (SelectionMode mode : spec.modes) {
        SanitizerConfig cfg;
        cfg.k_percent = k;
        cfg.eps_priv = eps;
        cfg.clip_bound = spec.clip_bound;
        cfg.seed = spec.seed;
        cfg.mode = mode;
        grid.rows.push_back(runner.Evaluate(cfg));
      }
    }
  }
  return grid;
}

}  // namespace rshd
