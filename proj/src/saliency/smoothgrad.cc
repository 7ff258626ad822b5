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

#include "rshd/saliency/smoothgrad.h"

#include <cmath>
#include <iostream>
#include <random>
#include <string>
#include <utility>

#include "rshd/common/error.h"
#include "rshd/common/parallel.h"
#include "rshd/common/rng.h"
#include "rshd/tensor/ops.h"

namespace rshd {
namespace {

constexpr std::uint64_t kSmoothGradTag = 31;

}  // namespace

SaliencyMap::SaliencyMap(Matrix values) : values_(std::move(values)) {
  for (double v : values_.data()) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      ThrowData("saliency map entries must be finite and non-negative");
    }
  }
}

void SmoothGradConfig::Validate() const {
  if (n_samples == 0) ThrowConfig("smoothgrad: n_samples must be at least 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    ThrowConfig("smoothgrad: sigma must be finite and >= 0");
  }
}

SaliencyMap SmoothGrad(const SidModel& model, const FeatureMatrix& x,
                       std::size_t label, const SmoothGradConfig& cfg,
                       std::uint64_t stream) {
  cfg.Validate();
  if (label >= model.config().num_classes) {
    ThrowContract("smoothgrad: label " + std::to_string(label) +
                  " out of range for " + std::to_string(model.config().num_classes) +
                  " speakers");
  }
  Rng rng = MakeStream(cfg.seed, stream, kSmoothGradTag);
  std::normal_distribution<double> noise(0.0, cfg.sigma > 0.0 ? cfg.sigma : 1.0);
  Matrix total(x.rows(), x.cols());
  for (std::size_t j = 0; j < cfg.n_samples; ++j) {
    Matrix noisy = x;
    if (cfg.sigma > 0.0) {
      for (double& v : noisy.data()) v += noise(rng);
    }
    const Tensor input(std::move(noisy), true);
    const Tensor loss = CrossEntropy(model.Logits(input), label);
    const Tensor targets[] = {input};
    Backward(loss, targets);
    const Matrix grad = input.grad();
    for (std::size_t i = 0; i < grad.size(); ++i) {
      total.data()[i] += std::abs(grad.data()[i]);
    }
  }
  const double n = static_cast<double>(cfg.n_samples);
  for (double& v : total.data()) v /= n;
  return SaliencyMap(std::move(total));
}

SaliencyDataset BuildSaliencyDataset(std::span<const LabeledFeatures> data,
                                     const SidModel& model,
                                     const SmoothGradConfig& cfg,
                                     std::string sid_checkpoint) {
  cfg.Validate();
  SaliencyDataset dataset;
  dataset.provenance = {std::move(sid_checkpoint), cfg};
  if (data.empty()) {
    std::cerr << "warning: build_saliency_dataset: empty input dataset\n";
    return dataset;
  }
  dataset.pairs.resize(data.size());
  ParallelFor(data.size(), [&](std::size_t i) {
    try {
      dataset.pairs[i] = {data[i].id, *data[i].x,
                          SmoothGrad(model, *data[i].x, data[i].label, cfg, i)};
    } catch (const Error& e) {
      throw Error(e.category(),
                  "sample " + std::to_string(i) + " (" + data[i].id + "): " + e.what());
    }
  });
  return dataset;
}

}  // namespace rshd
