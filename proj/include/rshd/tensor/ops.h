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

#ifndef RSHD_TENSOR_OPS_H_
#define RSHD_TENSOR_OPS_H_

#include <cstddef>
#include <span>

#include "rshd/common/rng.h"
#include "rshd/tensor/tensor.h"

// Differentiable primitives. All tensors are rank 2; scalars are 1x1.
// Shape mismatches throw a dimension error carrying both shapes.

namespace rshd {

inline constexpr double kLayerNormEpsilon = 1e-5;

Tensor MatMul(const Tensor& a, const Tensor& b);
Tensor Transpose(const Tensor& a);
Tensor Add(const Tensor& a, const Tensor& b);
// a (m x n) plus `row` (1 x n) added to every row.
Tensor AddRowBroadcast(const Tensor& a, const Tensor& row);
Tensor Sub(const Tensor& a, const Tensor& b);
Tensor Mul(const Tensor& a, const Tensor& b);
Tensor Scale(const Tensor& a, double factor);
Tensor Relu(const Tensor& a);
Tensor SoftmaxRows(const Tensor& a);
// Per-row standardization with variance + kLayerNormEpsilon in the
// denominator, then gain and bias (both 1 x cols).
Tensor LayerNormRows(const Tensor& a, const Tensor& gain, const Tensor& bias);
// t x d -> 1 x d arithmetic mean over rows.
Tensor MeanPoolTime(const Tensor& x);
// Inverted dropout: kept entries are divided by (1 - rate). Returns `a`
// itself when `train` is false or rate is 0.
Tensor Dropout(const Tensor& a, double rate, Rng& rng, bool train);
Tensor ConcatCols(std::span<const Tensor> parts);
Tensor SliceCols(const Tensor& a, std::size_t begin, std::size_t count);
Tensor Sum(const Tensor& a);
Tensor Mean(const Tensor& a);
// Each row divided by its L2 norm. A zero row is a numeric error.
Tensor L2NormalizeRows(const Tensor& a);

// -log softmax(logits)[label] for 1 x C logits.
Tensor CrossEntropy(const Tensor& logits, std::size_t label);
// Mean absolute error. The subgradient at pred == target is 0.
Tensor L1Loss(const Tensor& pred, const Tensor& target);

}  // namespace rshd

#endif  // RSHD_TENSOR_OPS_H_
