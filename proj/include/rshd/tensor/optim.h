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

#ifndef RSHD_TENSOR_OPTIM_H_
#define RSHD_TENSOR_OPTIM_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rshd/tensor/tensor.h"

namespace rshd {

struct NamedParameter {
  std::string name;
  Tensor tensor;
};

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First and second moment estimates for one parameter.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::size_t step = 0;
};

// One bias-corrected Adam update of `param` in place. `state` is zero-sized
// before the first call and is initialized here. Non-finite gradients throw a
// numeric error naming the parameter.
void AdamStep(std::span<double> param, std::span<const double> grad,
              AdamState& state, const AdamOptions& options,
              const std::string& name);

class Adam {
 public:
  Adam(std::vector<NamedParameter> params, AdamOptions options);

  // Applies AdamStep to every parameter using its accumulated gradient.
  void Step();
  void ZeroGrad();

  const std::vector<AdamState>& states() const { return states_; }

 private:
  std::vector<NamedParameter> params_;
  std::vector<AdamState> states_;
  AdamOptions options_;
};

}  // namespace rshd

#endif  // RSHD_TENSOR_OPTIM_H_
