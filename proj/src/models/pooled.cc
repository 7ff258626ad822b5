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

#include "rshd/models/pooled.h"

#include <algorithm>

#include "rshd/common/error.h"
#include "rshd/tensor/ops.h"

namespace rshd {

PooledLinearModel::PooledLinearModel(const PooledLinearConfig& config, Rng& rng)
    : config_(config) {
  if (config.input_dim == 0) ThrowConfig("pooled model: input_dim must be positive");
  if (config.num_classes < 2) ThrowConfig("pooled model: need at least 2 classes");
  fc_ = Linear(config.input_dim, config.num_classes, rng);
}

Tensor PooledLinearModel::Logits(const Tensor& x) const {
  if (x.cols() != config_.input_dim) {
    ThrowDimension("pooled model", x.rows(), x.cols(), x.rows(), config_.input_dim);
  }
  return fc_.Forward(MeanPoolTime(x));
}

std::size_t PooledLinearModel::Predict(const Matrix& x) const {
  NoGradGuard no_grad;
  const Tensor logits = Logits(Tensor(x));
  const auto z = logits.value().data();
  return static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
}

std::vector<NamedParameter> PooledLinearModel::Parameters() const {
  std::vector<NamedParameter> params;
  fc_.AppendParameters("fc", &params);
  return params;
}

}  // namespace rshd
