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

#include "rshd/sanitizer/mask.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rshd/common/error.h"
#include "rshd/common/rng.h"

namespace rshd {

PerturbationMask::PerturbationMask(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

void PerturbationMask::Set(std::size_t flat, bool value) {
  const std::uint8_t bit = value ? 1 : 0;
  if (bits_[flat] == bit) return;
  bits_[flat] = bit;
  if (value) ++count_;
  else --count_;
}

std::size_t PerturbationMask::Intersection(const PerturbationMask& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    ThrowDimension("mask intersection", rows_, cols_, other.rows_, other.cols_);
  }
  std::size_t both = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) both += bits_[i] & other.bits_[i];
  return both;
}

double PerturbationMask::Jaccard(const PerturbationMask& other) const {
  const std::size_t both = Intersection(other);
  const std::size_t either = count_ + other.count_ - both;
  if (either == 0) return 1.0;
  return static_cast<double>(both) / static_cast<double>(either);
}

std::size_t SelectionCount(std::size_t n, double k_percent) {
  if (!(k_percent >= 0.0 && k_percent <= 100.0)) {
    ThrowContract("selection: k_percent must lie in [0, 100], got " +
                  std::to_string(k_percent));
  }
  // k * n is exact for integral k at these sizes, so an exact .5 stays .5.
  const double exact = k_percent * static_cast<double>(n) / 100.0;
  // nearbyint under the default rounding mode: ties go to even.
  const double rounded = std::nearbyint(exact);
  return std::min(n, static_cast<std::size_t>(rounded));
}

PerturbationMask SelectTopK(const Matrix& scores, double k_percent) {
  const std::size_t n = scores.size();
  const std::size_t m = SelectionCount(n, k_percent);
  PerturbationMask mask(scores.rows(), scores.cols());
  if (m == 0) return mask;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto values = scores.data();
  auto before = [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  };
  if (m < n) {
    std::nth_element(order.begin(), order.begin() + (m - 1), order.end(), before);
  }
  for (std::size_t i = 0; i < m; ++i) mask.Set(order[i], true);
  return mask;
}

PerturbationMask SelectRandom(std::size_t t, std::size_t d, double k_percent,
                              std::uint64_t seed) {
  const std::size_t n = t * d;
  const std::size_t m = SelectionCount(n, k_percent);
  PerturbationMask mask(t, d);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng = MakeStream(seed);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < m; ++i) mask.Set(order[i], true);
  return mask;
}

}  // namespace rshd
