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

#ifndef RSHD_MODELS_TRAIN_H_
#define RSHD_MODELS_TRAIN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rshd/models/embedder.h"
#include "rshd/models/pooled.h"
#include "rshd/models/pse.h"
#include "rshd/tensor/matrix.h"

namespace rshd {

struct TrainConfig {
  double lr = 1e-3;
  std::size_t batch_size = 16;
  std::size_t epochs = 20;
  double dropout = 0.0;
  std::uint64_t seed = 0;
  double validation_fraction = 0.1;

  void Validate() const;
};

TrainConfig SidTrainDefaults();
TrainConfig ClassifierTrainDefaults();
TrainConfig EmbedderTrainDefaults();
TrainConfig PseTrainDefaults();
// Full-scale training: lr 1e-4, batch 32, 60 epochs, dropout 0.1.
TrainConfig PseFullScaleTrainDefaults();

struct LabeledExample {
  Matrix x;
  std::size_t label = 0;
};

struct RegressionExample {
  Matrix x;
  Matrix target;
};

struct TrainReport {
  std::vector<double> train_loss;       // per epoch, mean over batches
  std::vector<double> validation_loss;  // per epoch, after the epoch's updates
  std::size_t best_epoch = 0;
  double best_validation_loss = 0.0;
  std::size_t train_size = 0;
  std::size_t validation_size = 0;
};

// Stratified by label: each label with >= 2 examples contributes at least one
// validation and one training example. Returns (train, validation) indices.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> StratifiedSplit(
    std::span<const std::size_t> labels, double validation_fraction,
    std::uint64_t seed);

// Each returns the epoch checkpoint with the lowest validation loss.
SidModel TrainSid(std::span<const LabeledExample> data, std::size_t num_classes,
                  const TrainConfig& config, TrainReport* report = nullptr);
ClassifierModel TrainClassifier(std::span<const LabeledExample> data,
                                std::size_t num_classes,
                                const TrainConfig& config,
                                TrainReport* report = nullptr);
EmbedderModel TrainEmbedder(std::span<const LabeledExample> data,
                            const EmbedderConfig& arch,
                            const TrainConfig& config,
                            TrainReport* report = nullptr);
// config.dropout overrides arch.dropout.
PseModel TrainPse(std::span<const RegressionExample> data, PseConfig arch,
                  const TrainConfig& config, TrainReport* report = nullptr);

double Accuracy(const PooledLinearModel& model,
                std::span<const LabeledExample> data);
double MeanCrossEntropy(const PooledLinearModel& model,
                        std::span<const LabeledExample> data);
double MeanL1(const PseModel& model, std::span<const RegressionExample> data);

}  // namespace rshd

#endif  // RSHD_MODELS_TRAIN_H_
