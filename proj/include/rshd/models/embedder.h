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

#ifndef RSHD_MODELS_EMBEDDER_H_
#define RSHD_MODELS_EMBEDDER_H_

#include <cstddef>
#include <vector>

#include "rshd/common/rng.h"
#include "rshd/models/layers.h"
#include "rshd/tensor/matrix.h"
#include "rshd/tensor/tensor.h"

namespace rshd {

struct EmbedderConfig {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 64;
  std::size_t embedding_dim = 32;
  std::size_t num_classes = 0;
};

// Speaker-verification stand-in: mean pool, FC + ReLU, FC to the embedding,
// and a linear speaker head used only for training. The embedding is the
// pre-logit activation.
class EmbedderModel {
 public:
  EmbedderModel(const EmbedderConfig& config, Rng& rng);

  const EmbedderConfig& config() const { return config_; }

  // 1 x embedding_dim, before normalization.
  Tensor RawEmbedding(const Tensor& x) const;
  Tensor Logits(const Tensor& x) const;
  // Unit-L2 embedding; deterministic.
  std::vector<double> Embed(const Matrix& x) const;

  std::vector<NamedParameter> Parameters() const;

 private:
  EmbedderConfig config_;
  Linear hidden_;
  Linear embedding_;
  Linear head_;
};

}  // namespace rshd

#endif  // RSHD_MODELS_EMBEDDER_H_
