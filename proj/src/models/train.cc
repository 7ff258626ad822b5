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

#include "rshd/models/train.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "rshd/common/error.h"
#include "rshd/common/rng.h"
#include "rshd/tensor/ops.h"
#include "rshd/tensor/optim.h"

namespace rshd {
namespace {

// Stream tags so initialization, splitting, shuffling and dropout never share
// random numbers.
constexpr std::uint64_t kInitTag = 1;
constexpr std::uint64_t kSplitTag = 2;
constexpr std::uint64_t kShuffleTag = 3;
constexpr std::uint64_t kDropoutTag = 4;

// Per-example loss: (index, train flag, dropout rng) -> 1x1 tensor.
template <class LossFn>
double MeanLoss(std::span<const std::size_t> indices, const LossFn& loss_fn) {
  NoGradGuard no_grad;
  double total = 0.0;
  for (std::size_t i : indices) total += loss_fn(i, false, nullptr).item();
  return total / static_cast<double>(indices.size());
}

template <class LossFn>
void Fit(std::vector<NamedParameter> params, std::span<const std::size_t> labels,
         const LossFn& loss_fn, const TrainConfig& config, TrainReport* report) {
  auto [train_idx, val_idx] =
      StratifiedSplit(labels, config.validation_fraction, config.seed);
  if (train_idx.empty() || val_idx.empty()) {
    ThrowData("training: dataset too small for a train/validation split");
  }
  Adam optimizer(params, AdamOptions{.lr = config.lr});
  Rng shuffle_rng = MakeStream(config.seed, 0, kShuffleTag);
  Rng dropout_rng = MakeStream(config.seed, 0, kDropoutTag);

  TrainReport local;
  local.train_size = train_idx.size();
  local.validation_size = val_idx.size();
  ParameterSnapshot best = Snapshot(params);
  double best_loss = MeanLoss(val_idx, loss_fn);
  bool have_best = false;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(train_idx.begin(), train_idx.end(), shuffle_rng);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < train_idx.size(); start += config.batch_size) {
      const std::size_t stop = std::min(train_idx.size(), start + config.batch_size);
      Tensor total;
      for (std::size_t j = start; j < stop; ++j) {
        Tensor loss = loss_fn(train_idx[j], true, &dropout_rng);
        total = total.defined() ? Add(total, loss) : loss;
      }
      const Tensor batch_loss = Scale(total, 1.0 / static_cast<double>(stop - start));
      optimizer.ZeroGrad();
      Backward(batch_loss);
      optimizer.Step();
      epoch_loss += batch_loss.item();
      ++batches;
    }
    const double val_loss = MeanLoss(val_idx, loss_fn);
    local.train_loss.push_back(epoch_loss / static_cast<double>(batches));
    local.validation_loss.push_back(val_loss);
    if (!have_best || val_loss < best_loss) {
      have_best = true;
      best_loss = val_loss;
      best = Snapshot(params);
      local.best_epoch = epoch;
    }
  }
  optimizer.ZeroGrad();
  Restore(best, params);
  local.best_validation_loss = best_loss;
  if (report != nullptr) *report = std::move(local);
}

void CheckLabels(std::span<const LabeledExample> data, std::size_t num_classes,
                 std::size_t input_dim, const char* what) {
  if (data.empty()) ThrowContract(std::string(what) + ": empty dataset");
  std::set<std::size_t> seen;
  for (const LabeledExample& ex : data) {
    if (ex.label >= num_classes) {
      ThrowContract(std::string(what) + ": label " + std::to_string(ex.label) +
                    " out of range for " + std::to_string(num_classes) + " classes");
    }
    if (ex.x.cols() != input_dim || ex.x.rows() == 0) {
      ThrowDimension(what, ex.x.rows(), ex.x.cols(), ex.x.rows(), input_dim);
    }
    seen.insert(ex.label);
  }
  if (seen.size() < 2) {
    ThrowContract(std::string(what) + ": need at least 2 distinct classes");
  }
}

std::vector<std::size_t> LabelsOf(std::span<const LabeledExample> data) {
  std::vector<std::size_t> labels;
  labels.reserve(data.size());
  for (const LabeledExample& ex : data) labels.push_back(ex.label);
  return labels;
}

template <class Model>
Model TrainPooled(std::span<const LabeledExample> data, std::size_t num_classes,
                  const TrainConfig& config, TrainReport* report, const char* what) {
  config.Validate();
  CheckLabels(data, num_classes, data.empty() ? 0 : data[0].x.cols(), what);
  Rng init = MakeStream(config.seed, 0, kInitTag);
  Model model(PooledLinearConfig{data[0].x.cols(), num_classes}, init);
  auto loss_fn = [&](std::size_t i, bool, Rng*) {
    return CrossEntropy(model.Logits(Tensor(data[i].x)), data[i].label);
  };
  Fit(model.Parameters(), LabelsOf(data), loss_fn, config, report);
  return model;
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(lr > 0.0)) ThrowConfig("train: lr must be positive");
  if (batch_size == 0) ThrowConfig("train: batch_size must be positive");
  if (epochs == 0) ThrowConfig("train: epochs must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) ThrowConfig("train: dropout must lie in [0, 1)");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    ThrowConfig("train: validation_fraction must lie in (0, 1)");
  }
}

TrainConfig SidTrainDefaults() {
  return TrainConfig{.lr = 1e-2, .batch_size = 16, .epochs = 30, .dropout = 0.0,
                     .seed = 0, .validation_fraction = 0.1};
}

TrainConfig ClassifierTrainDefaults() { return SidTrainDefaults(); }

TrainConfig EmbedderTrainDefaults() {
  return TrainConfig{.lr = 3e-3, .batch_size = 16, .epochs = 30, .dropout = 0.0,
                     .seed = 0, .validation_fraction = 0.1};
}

TrainConfig PseTrainDefaults() {
  return TrainConfig{.lr = 1e-3, .batch_size = 8, .epochs = 60, .dropout = 0.1,
                     .seed = 0, .validation_fraction = 0.1};
}

TrainConfig PseFullScaleTrainDefaults() {
  return TrainConfig{.lr = 1e-4, .batch_size = 32, .epochs = 60, .dropout = 0.1,
                     .seed = 0, .validation_fraction = 0.1};
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> StratifiedSplit(
    std::span<const std::size_t> labels, double validation_fraction,
    std::uint64_t seed) {
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
  Rng rng = MakeStream(seed, 0, kSplitTag);
  std::vector<std::size_t> train, validation;
  for (auto& [label, members] : groups) {
    std::shuffle(members.begin(), members.end(), rng);
    std::size_t n_val = static_cast<std::size_t>(
        std::lround(validation_fraction * static_cast<double>(members.size())));
    if (members.size() >= 2) n_val = std::clamp<std::size_t>(n_val, 1, members.size() - 1);
    else n_val = 0;
    validation.insert(validation.end(), members.begin(), members.begin() + n_val);
    train.insert(train.end(), members.begin() + n_val, members.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(validation.begin(), validation.end());
  return {std::move(train), std::move(validation)};
}

SidModel TrainSid(std::span<const LabeledExample> data, std::size_t num_classes,
                  const TrainConfig& config, TrainReport* report) {
  return TrainPooled<SidModel>(data, num_classes, config, report, "train_sid");
}

ClassifierModel TrainClassifier(std::span<const LabeledExample> data,
                                std::size_t num_classes, const TrainConfig& config,
                                TrainReport* report) {
  return TrainPooled<ClassifierModel>(data, num_classes, config, report,
                                      "train_classifier");
}

EmbedderModel TrainEmbedder(std::span<const LabeledExample> data,
                            const EmbedderConfig& arch, const TrainConfig& config,
                            TrainReport* report) {
  config.Validate();
  CheckLabels(data, arch.num_classes, arch.input_dim, "train_embedder");
  Rng init = MakeStream(config.seed, 0, kInitTag);
  EmbedderModel model(arch, init);
  auto loss_fn = [&](std::size_t i, bool, Rng*) {
    return CrossEntropy(model.Logits(Tensor(data[i].x)), data[i].label);
  };
  Fit(model.Parameters(), LabelsOf(data), loss_fn, config, report);
  return model;
}

PseModel TrainPse(std::span<const RegressionExample> data, PseConfig arch,
                  const TrainConfig& config, TrainReport* report) {
  config.Validate();
  if (data.empty()) ThrowContract("train_pse: empty saliency dataset");
  if (data.size() < 10) {
    ThrowContract("train_pse: need at least 10 samples, got " +
                  std::to_string(data.size()));
  }
  for (const RegressionExample& ex : data) {
    if (ex.x.cols() != arch.input_dim || ex.x.rows() == 0) {
      ThrowDimension("train_pse", ex.x.rows(), ex.x.cols(), ex.x.rows(), arch.input_dim);
    }
    if (ex.target.rows() != ex.x.rows() || ex.target.cols() != ex.x.cols()) {
      ThrowDimension("train_pse(target)", ex.x.rows(), ex.x.cols(), ex.target.rows(),
                     ex.target.cols());
    }
  }
  arch.dropout = config.dropout;
  arch.Validate();
  Rng init = MakeStream(config.seed, 0, kInitTag);
  PseModel model(arch, init);
  auto loss_fn = [&](std::size_t i, bool train, Rng* rng) {
    return L1Loss(model.Forward(Tensor(data[i].x), train, rng), Tensor(data[i].target));
  };
  const std::vector<std::size_t> one_stratum(data.size(), 0);
  Fit(model.Parameters(), one_stratum, loss_fn, config, report);
  return model;
}

double Accuracy(const PooledLinearModel& model, std::span<const LabeledExample> data) {
  if (data.empty()) ThrowContract("accuracy: empty dataset");
  std::size_t correct = 0;
  for (const LabeledExample& ex : data) correct += model.Predict(ex.x) == ex.label;
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double MeanCrossEntropy(const PooledLinearModel& model,
                        std::span<const LabeledExample> data) {
  NoGradGuard no_grad;
  double total = 0.0;
  for (const LabeledExample& ex : data) {
    total += CrossEntropy(model.Logits(Tensor(ex.x)), ex.label).item();
  }
  return total / static_cast<double>(data.size());
}

double MeanL1(const PseModel& model, std::span<const RegressionExample> data) {
  NoGradGuard no_grad;
  double total = 0.0;
  for (const RegressionExample& ex : data) {
    total += L1Loss(model.Forward(Tensor(ex.x), false), Tensor(ex.target)).item();
  }
  return total / static_cast<double>(data.size());
}

}  // namespace rshd
