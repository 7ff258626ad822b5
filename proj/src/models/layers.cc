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

#include "rshd/models/layers.h"

#include <cmath>
#include <random>

#include "rshd/common/error.h"
#include "rshd/tensor/ops.h"

namespace rshd {

Linear::Linear(std::size_t in, std::size_t out, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix w(in, out);
  for (double& v : w.data()) v = dist(rng);
  Matrix b(1, out);
  for (double& v : b.data()) v = dist(rng);
  weight_ = Tensor::Parameter(std::move(w));
  bias_ = Tensor::Parameter(std::move(b));
}

Tensor Linear::Forward(const Tensor& x) const {
  return AddRowBroadcast(MatMul(x, weight_), bias_);
}

void Linear::AppendParameters(const std::string& prefix,
                              std::vector<NamedParameter>* out) const {
  out->push_back({prefix + ".weight", weight_});
  out->push_back({prefix + ".bias", bias_});
}

LayerNorm::LayerNorm(std::size_t dim)
    : gain_(Tensor::Parameter(Matrix(1, dim, 1.0))),
      bias_(Tensor::Parameter(Matrix(1, dim, 0.0))) {}

Tensor LayerNorm::Forward(const Tensor& x) const {
  return LayerNormRows(x, gain_, bias_);
}

void LayerNorm::AppendParameters(const std::string& prefix,
                                 std::vector<NamedParameter>* out) const {
  out->push_back({prefix + ".gain", gain_});
  out->push_back({prefix + ".bias", bias_});
}

ParameterSnapshot Snapshot(const std::vector<NamedParameter>& params) {
  ParameterSnapshot snapshot;
  snapshot.reserve(params.size());
  for (const NamedParameter& p : params) snapshot.push_back(p.tensor.value());
  return snapshot;
}

void Restore(const ParameterSnapshot& snapshot,
             std::vector<NamedParameter>& params) {
  if (snapshot.size() != params.size()) {
    ThrowContract("restore: snapshot has " + std::to_string(snapshot.size()) +
                  " tensors, model has " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& dst = params[i].tensor.mutable_value();
    if (dst.rows() != snapshot[i].rows() || dst.cols() != snapshot[i].cols()) {
      ThrowDimension("restore(" + params[i].name + ")", dst.rows(), dst.cols(),
                     snapshot[i].rows(), snapshot[i].cols());
    }
    dst = snapshot[i];
  }
}

}  // namespace rshd
