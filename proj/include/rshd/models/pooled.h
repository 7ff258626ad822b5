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

#ifndef RSHD_MODELS_POOLED_H_
#define RSHD_MODELS_POOLED_H_

#include <cstddef>
#include <vector>

#include "rshd/common/rng.h"
#include "rshd/models/layers.h"
#include "rshd/tensor/matrix.h"
#include "rshd/tensor/tensor.h"

namespace rshd {

struct PooledLinearConfig {
  std::size_t input_dim = 0;
  std::size_t num_classes = 0;
};

// Mean pooling over time followed by one fully-connected layer. Logits are
// 1 x num_classes for any number of frames.
class PooledLinearModel {
 public:
  PooledLinearModel(const PooledLinearConfig& config, Rng& rng);

  const PooledLinearConfig& config() const { return config_; }

  Tensor Logits(const Tensor& x) const;
  std::size_t Predict(const Matrix& x) const;

  std::vector<NamedParameter> Parameters() const;

 private:
  PooledLinearConfig config_;
  Linear fc_;
};

// Speaker identification model whose input gradients define privacy risk.
class SidModel : public PooledLinearModel {
 public:
  using PooledLinearModel::PooledLinearModel;
};

// Frozen downstream task evaluator (emotion / intent analogues).
class ClassifierModel : public PooledLinearModel {
 public:
  using PooledLinearModel::PooledLinearModel;
};

}  // namespace rshd

#endif  // RSHD_MODELS_POOLED_H_
