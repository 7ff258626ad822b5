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

#ifndef RSHD_MODELS_PSE_H_
#define RSHD_MODELS_PSE_H_

#include <cstddef>
#include <vector>

#include "rshd/common/rng.h"
#include "rshd/models/layers.h"
#include "rshd/tensor/matrix.h"
#include "rshd/tensor/tensor.h"

namespace rshd {

struct PseConfig {
  std::size_t input_dim = 0;
  std::size_t model_dim = 64;
  std::size_t num_layers = 2;
  std::size_t num_heads = 4;
  std::size_t ff_dim = 128;
  double dropout = 0.1;

  void Validate() const;
};

// Sizes that run on a laptop: 2 layers, 4 heads, model width 64, FF 128.
PseConfig DeskPseConfig(std::size_t input_dim);
// Full-scale estimator: 6 layers, 12 heads, FF 3072, dropout 0.1, sized
// for 768-dimensional encoder features.
PseConfig FullScalePseConfig(std::size_t input_dim);

// One post-norm encoder block: self-attention then a ReLU feed-forward
// network, each wrapped in dropout, a residual connection and LayerNorm.
class EncoderLayer {
 public:
  EncoderLayer(const PseConfig& config, Rng& rng);

  Tensor Forward(const Tensor& h, bool train, Rng* rng,
                 std::vector<Matrix>* attention) const;

  void AppendParameters(const std::string& prefix,
                        std::vector<NamedParameter>* out) const;

 private:
  std::size_t num_heads_;
  double dropout_;
  Linear query_, key_, value_, output_;
  LayerNorm norm1_;
  Linear ff1_, ff2_;
  LayerNorm norm2_;
};

// Privacy-risk saliency estimator: t x d in, t x d out, for any t >= 1.
// Input projection d -> model_dim, sinusoidal positions, a stack of encoder
// layers, output projection model_dim -> d. Outputs are unconstrained reals.
class PseModel {
 public:
  PseModel(const PseConfig& config, Rng& rng);

  const PseConfig& config() const { return config_; }

  // `rng` is needed only when train is true. When `attention` is non-null it
  // receives each head's post-softmax weights, layer-major.
  Tensor Forward(const Tensor& x, bool train, Rng* rng = nullptr,
                 std::vector<Matrix>* attention = nullptr) const;

  // Eval-mode estimate without recording a graph.
  Matrix Estimate(const Matrix& x) const;

  std::vector<NamedParameter> Parameters() const;

 private:
  PseConfig config_;
  Linear input_;
  std::vector<EncoderLayer> layers_;
  Linear output_;
};

// Standard sin/cos position table, rows x dim.
Matrix SinusoidalPositions(std::size_t rows, std::size_t dim);

}  // namespace rshd

#endif  // RSHD_MODELS_PSE_H_
