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

#ifndef RSHD_TESTS_SUPPORT_GRADCHECK_H_
#define RSHD_TESTS_SUPPORT_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "rshd/tensor/tensor.h"

namespace rshd::testing {

struct GradCheckResult {
  double worst_excess = 0.0;  // max over entries of |a - n| - tolerance
  std::string where;
};

// Compares analytic gradients of `loss_fn(leaves)` against central
// differences with step h. Tolerance per entry: abs_tol + rel_tol * max(|a|, |n|).
// When a leaf has more than `max_entries` entries, a seeded sample of that
// many entries is checked instead of all of them.
inline GradCheckResult CheckGradients(
    const std::function<Tensor(const std::vector<Tensor>&)>& loss_fn,
    std::vector<Tensor> leaves, double h = 1e-5, double rel_tol = 1e-3,
    double abs_tol = 1e-6,
    std::size_t max_entries = std::numeric_limits<std::size_t>::max(),
    std::uint64_t sample_seed = 0) {
  for (auto& t : leaves) t.ZeroGrad();
  Backward(loss_fn(leaves));
  std::vector<Matrix> analytic;
  for (const auto& t : leaves) analytic.push_back(t.grad());

  GradCheckResult result;
  result.worst_excess = -1.0;
  NoGradGuard guard;
  for (std::size_t li = 0; li < leaves.size(); ++li) {
    Matrix& v = leaves[li].mutable_value();
    std::vector<std::size_t> entries(v.size());
    std::iota(entries.begin(), entries.end(), std::size_t{0});
    if (entries.size() > max_entries) {
      std::mt19937_64 gen(sample_seed * 1000003 + li);
      std::shuffle(entries.begin(), entries.end(), gen);
      entries.resize(max_entries);
    }
    for (std::size_t i : entries) {
      const double saved = v.data()[i];
      v.data()[i] = saved + h;
      const double up = loss_fn(leaves).item();
      v.data()[i] = saved - h;
      const double down = loss_fn(leaves).item();
      v.data()[i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic[li].data()[i];
      const double tol = abs_tol + rel_tol * std::max(std::abs(a), std::abs(numeric));
      const double excess = std::abs(a - numeric) - tol;
      if (excess > result.worst_excess) {
        result.worst_excess = excess;
        result.where = "leaf " + std::to_string(li) + " entry " + std::to_string(i) +
                       ": analytic " + std::to_string(a) + " numeric " +
                       std::to_string(numeric);
      }
    }
  }
  return result;
}

}  // namespace rshd::testing

#endif  // RSHD_TESTS_SUPPORT_GRADCHECK_H_
