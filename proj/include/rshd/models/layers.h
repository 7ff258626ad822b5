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

#ifndef RSHD_MODELS_LAYERS_H_
#define RSHD_MODELS_LAYERS_H_

#include <cstddef>
#include <string>
#include <vector>

#include "rshd/common/rng.h"
#include "rshd/tensor/matrix.h"
#include "rshd/tensor/optim.h"
#include "rshd/tensor/tensor.h"

namespace rshd {

// y = x W + b with W (in x out) and b (1 x out).
class Linear {
 public:
  Linear() = default;
  // Weights and bias ~ U(-1/sqrt(in), 1/sqrt(in)).
  Linear(std::size_t in, std::size_t out, Rng& rng);

  Tensor Forward(const Tensor& x) const;

  std::size_t in_dim() const { return weight_.rows(); }
  std::size_t out_dim() const { return weight_.cols(); }

  void AppendParameters(const std::string& prefix,
                        std::vector<NamedParameter>* out) const;

 private:
  Tensor weight_;
  Tensor bias_;
};

// Learned per-feature gain and bias around LayerNormRows.
class LayerNorm {
 public:
  LayerNorm() = default;
  explicit LayerNorm(std::size_t dim);

  Tensor Forward(const Tensor& x) const;

  void AppendParameters(const std::string& prefix,
                        std::vector<NamedParameter>* out) const;

 private:
  Tensor gain_;
  Tensor bias_;
};

// Copies of every parameter value, for model selection.
using ParameterSnapshot = std::vector<Matrix>;

ParameterSnapshot Snapshot(const std::vector<NamedParameter>& params);
void Restore(const ParameterSnapshot& snapshot,
             std::vector<NamedParameter>& params);

}  // namespace rshd

#endif  // RSHD_MODELS_LAYERS_H_
