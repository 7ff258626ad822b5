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

#include "rshd/models/pse.h"

#include <cmath>
#include <string>

#include "rshd/common/error.h"
#include "rshd/tensor/ops.h"

namespace rshd {

void PseConfig::Validate() const {
  if (input_dim == 0 || model_dim == 0 || num_layers == 0 || num_heads == 0 ||
      ff_dim == 0) {
    ThrowConfig("pse: all dimensions must be positive");
  }
  if (model_dim % num_heads != 0) {
    ThrowConfig("pse: model_dim " + std::to_string(model_dim) +
                " is not divisible by num_heads " + std::to_string(num_heads));
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) ThrowConfig("pse: dropout must lie in [0, 1)");
}

PseConfig DeskPseConfig(std::size_t input_dim) {
  PseConfig config;
  config.input_dim = input_dim;
  return config;
}

PseConfig FullScalePseConfig(std::size_t input_dim) {
  PseConfig config;
  config.input_dim = input_dim;
  config.model_dim = 768;
  config.num_layers = 6;
  config.num_heads = 12;
  config.ff_dim = 3072;
  config.dropout = 0.1;
  return config;
}

Matrix SinusoidalPositions(std::size_t rows, std::size_t dim) {
  Matrix pe(rows, dim);
  for (std::size_t pos = 0; pos < rows; ++pos) {
    for (std::size_t i = 0; i < dim; i += 2) {
      const double freq =
          std::pow(10000.0, -static_cast<double>(i) / static_cast<double>(dim));
      pe(pos, i) = std::sin(static_cast<double>(pos) * freq);
      if (i + 1 < dim) pe(pos, i + 1) = std::cos(static_cast<double>(pos) * freq);
    }
  }
  return pe;
}

EncoderLayer::EncoderLayer(const PseConfig& config, Rng& rng)
    : num_heads_(config.num_heads),
      dropout_(config.dropout),
      query_(config.model_dim, config.model_dim, rng),
      key_(config.model_dim, config.model_dim, rng),
      value_(config.model_dim, config.model_dim, rng),
      output_(config.model_dim, config.model_dim, rng),
      norm1_(config.model_dim),
      ff1_(config.model_dim, config.ff_dim, rng),
      ff2_(config.ff_dim, config.model_dim, rng),
      norm2_(config.model_dim) {}

Tensor EncoderLayer::Forward(const Tensor& h, bool train, Rng* rng,
                             std::vector<Matrix>* attention) const {
  const std::size_t model_dim = h.cols();
  const std::size_t head_dim = model_dim / num_heads_;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(head_dim));
  auto drop = [&](const Tensor& t) {
    return train && dropout_ > 0.0 ? Dropout(t, dropout_, *rng, true) : t;
  };
  const Tensor q = query_.Forward(h);
  const Tensor k = key_.Forward(h);
  const Tensor v = value_.Forward(h);
  std::vector<Tensor> heads;
  heads.reserve(num_heads_);
  for (std::size_t head = 0; head < num_heads_; ++head) {
    const std::size_t begin = head * head_dim;
    const Tensor qh = SliceCols(q, begin, head_dim);
    const Tensor kh = SliceCols(k, begin, head_dim);
    const Tensor vh = SliceCols(v, begin, head_dim);
    const Tensor weights =
        SoftmaxRows(Scale(MatMul(qh, Transpose(kh)), inv_sqrt));
    if (attention != nullptr) attention->push_back(weights.value());
    heads.push_back(MatMul(drop(weights), vh));
  }
  const Tensor attended = drop(output_.Forward(ConcatCols(heads)));
  const Tensor mid = norm1_.Forward(Add(h, attended));
  const Tensor ff = drop(ff2_.Forward(drop(Relu(ff1_.Forward(mid)))));
  return norm2_.Forward(Add(mid, ff));
}

void EncoderLayer::AppendParameters(const std::string& prefix,
                                    std::vector<NamedParameter>* out) const {
  query_.AppendParameters(prefix + ".attn.query", out);
  key_.AppendParameters(prefix + ".attn.key", out);
  value_.AppendParameters(prefix + ".attn.value", out);
  output_.AppendParameters(prefix + ".attn.output", out);
  norm1_.AppendParameters(prefix + ".norm1", out);
  ff1_.AppendParameters(prefix + ".ff1", out);
  ff2_.AppendParameters(prefix + ".ff2", out);
  norm2_.AppendParameters(prefix + ".norm2", out);
}

PseModel::PseModel(const PseConfig& config, Rng& rng) : config_(config) {
  config.Validate();
  input_ = Linear(config.input_dim, config.model_dim, rng);
  layers_.reserve(config.num_layers);
  for (std::size_t i = 0; i < config.num_layers; ++i) {
    layers_.emplace_back(config, rng);
  }
  output_ = Linear(config.model_dim, config.input_dim, rng);
}

Tensor PseModel::Forward(const Tensor& x, bool train, Rng* rng,
                         std::vector<Matrix>* attention) const {
  if (x.cols() != config_.input_dim) {
    ThrowDimension("pse_forward", x.rows(), x.cols(), x.rows(), config_.input_dim);
  }
  if (train && config_.dropout > 0.0 && rng == nullptr) {
    ThrowContract("pse_forward: training mode needs a dropout generator");
  }
  Tensor h = Add(input_.Forward(x),
                 Tensor(SinusoidalPositions(x.rows(), config_.model_dim)));
  if (train && config_.dropout > 0.0) h = Dropout(h, config_.dropout, *rng, true);
  for (const EncoderLayer& layer : layers_) {
    h = layer.Forward(h, train, rng, attention);
  }
  return output_.Forward(h);
}

Matrix PseModel::Estimate(const Matrix& x) const {
  NoGradGuard no_grad;
  return Forward(Tensor(x), false).value();
}

std::vector<NamedParameter> PseModel::Parameters() const {
  std::vector<NamedParameter> params;
  input_.AppendParameters("input", &params);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    layers_[i].AppendParameters("layer" + std::to_string(i), &params);
  }
  output_.AppendParameters("output", &params);
  return params;
}

}  // namespace rshd
