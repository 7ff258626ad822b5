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

#ifndef RSHD_SANITIZER_MASK_H_
#define RSHD_SANITIZER_MASK_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rshd/tensor/matrix.h"

namespace rshd {

// t x d selection of positions to perturb.
class PerturbationMask {
 public:
  PerturbationMask() = default;
  PerturbationMask(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return bits_.size(); }
  std::size_t count_selected() const { return count_; }

  bool at(std::size_t flat) const { return bits_[flat] != 0; }
  bool at(std::size_t r, std::size_t c) const { return at(r * cols_ + c); }
  void Set(std::size_t flat, bool value);
  void Set(std::size_t r, std::size_t c, bool value) { Set(r * cols_ + c, value); }

  // Number of positions selected in both masks; shapes must match.
  std::size_t Intersection(const PerturbationMask& other) const;
  // |A n B| / |A u B|; 1 when both are empty.
  double Jaccard(const PerturbationMask& other) const;

  friend bool operator==(const PerturbationMask&, const PerturbationMask&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

// m = round(k/100 * n), ties to even. k_percent must lie in [0, 100].
std::size_t SelectionCount(std::size_t n, double k_percent);

// The SelectionCount(t*d, k) largest entries of `scores`. Equal scores are
// taken in ascending row-major index order.
PerturbationMask SelectTopK(const Matrix& scores, double k_percent);

// SelectionCount(t*d, k) positions uniformly without replacement: the prefix
// of a seeded permutation, so masks for growing k at one seed are nested.
PerturbationMask SelectRandom(std::size_t t, std::size_t d, double k_percent,
                              std::uint64_t seed);

}  // namespace rshd

#endif  // RSHD_SANITIZER_MASK_H_
