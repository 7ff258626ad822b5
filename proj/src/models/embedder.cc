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

#include "rshd/models/embedder.h"

#include "rshd/common/error.h"
#include "rshd/tensor/ops.h"

namespace rshd {

EmbedderModel::EmbedderModel(const EmbedderConfig& config, Rng& rng)
    : config_(config) {
  if (config.input_dim == 0 || config.hidden_dim == 0 ||
      config.embedding_dim == 0) {
    ThrowConfig("embedder: dimensions must be positive");
  }
  if (config.num_classes < 2) ThrowConfig("embedder: need at least 2 speakers");
  hidden_ = Linear(config.input_dim, config.hidden_dim, rng);
  embedding_ = Linear(config.hidden_dim, config.embedding_dim, rng);
  head_ = Linear(config.embedding_dim, config.num_classes, rng);
}

Tensor EmbedderModel::RawEmbedding(const Tensor& x) const {
  if (x.cols() != config_.input_dim) {
    ThrowDimension("embedder", x.rows(), x.cols(), x.rows(), config_.input_dim);
  }
  return embedding_.Forward(Relu(hidden_.Forward(MeanPoolTime(x))));
}

Tensor EmbedderModel::Logits(const Tensor& x) const {
  return head_.Forward(RawEmbedding(x));
}

std::vector<double> EmbedderModel::Embed(const Matrix& x) const {
  NoGradGuard no_grad;
  const Tensor e = L2NormalizeRows(RawEmbedding(Tensor(x)));
  const auto values = e.value().data();
  return {values.begin(), values.end()};
}

std::vector<NamedParameter> EmbedderModel::Parameters() const {
  std::vector<NamedParameter> params;
  hidden_.AppendParameters("hidden", &params);
  embedding_.AppendParameters("embedding", &params);
  head_.AppendParameters("head", &params);
  return params;
}

}  // namespace rshd
