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

#include "rshd/tensor/optim.h"

#include <cmath>
#include <utility>

#include "rshd/common/error.h"

namespace rshd {

void AdamStep(std::span<double> param, std::span<const double> grad,
              AdamState& state, const AdamOptions& options,
              const std::string& name) {
  if (grad.size() != param.size()) {
    ThrowDimension("adam_step(" + name + ")", param.size(), 1, grad.size(), 1);
  }
  if (!(options.lr > 0.0)) ThrowConfig("adam: learning rate must be positive");
  for (double g : grad) {
    if (!std::isfinite(g)) ThrowNumeric("adam: non-finite gradient for " + name);
  }
  if (state.m.empty()) {
    state.m.assign(param.size(), 0.0);
    state.v.assign(param.size(), 0.0);
    state.step = 0;
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(options.beta1, t);
  const double correction2 = 1.0 - std::pow(options.beta2, t);
  for (std::size_t i = 0; i < param.size(); ++i) {
    state.m[i] = options.beta1 * state.m[i] + (1.0 - options.beta1) * grad[i];
    state.v[i] =
        options.beta2 * state.v[i] + (1.0 - options.beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / correction1;
    const double v_hat = state.v[i] / correction2;
    param[i] -= options.lr * m_hat / (std::sqrt(v_hat) + options.eps);
  }
}

Adam::Adam(std::vector<NamedParameter> params, AdamOptions options)
    : params_(std::move(params)), states_(params_.size()), options_(options) {}

void Adam::Step() {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Tensor& t = params_[i].tensor;
    const Matrix grad = t.grad();
    AdamStep(t.mutable_value().data(), grad.data(), states_[i], options_,
             params_[i].name);
  }
}

void Adam::ZeroGrad() {
  for (NamedParameter& p : params_) p.tensor.ZeroGrad();
}

}  // namespace rshd
