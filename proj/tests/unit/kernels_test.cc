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

#include "rshd/kernels/kernels.h"

#include <gtest/gtest.h>

#include <bit>
#include <cstdint>
#include <random>
#include <vector>

namespace rshd::kernels {
namespace {

std::vector<double> Random(std::size_t n, std::mt19937_64& gen) {
  std::normal_distribution<double> d(0.0, 3.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(gen);
  return v;
}

bool BitEqual(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) {
      return false;
    }
  }
  return true;
}

std::vector<const KernelTable*> Variants() {
  std::vector<const KernelTable*> out;
  if (Avx2() != nullptr) out.push_back(Avx2());
  if (Neon() != nullptr) out.push_back(Neon());
  return out;
}

TEST(ScalarKernels, GemmMatchesNaiveTripleLoop) {
  std::mt19937_64 gen(1);
  for (std::size_t m : {1, 3, 7}) {
    for (std::size_t k : {1, 4, 9}) {
      for (std::size_t n : {1, 2, 5, 13}) {
        auto a = Random(m * k, gen), b = Random(k * n, gen), c = Random(m * n, gen);
        auto expect = c;
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t p = 0; p < k; ++p) {
            for (std::size_t j = 0; j < n; ++j) {
              double prod = a[i * k + p] * b[p * n + j];
              expect[i * n + j] = expect[i * n + j] + prod;
            }
          }
        }
        Scalar().gemm_acc(a.data(), b.data(), c.data(), m, k, n);
        EXPECT_TRUE(BitEqual(c, expect)) << m << "x" << k << "x" << n;
      }
    }
  }
}

TEST(ScalarKernels, ElementwiseOps) {
  std::vector<double> a{1, 2, 3}, b{4, 5, 6}, out(3);
  Scalar().add(a.data(), b.data(), out.data(), 3);
  EXPECT_EQ(out, (std::vector<double>{5, 7, 9}));
  Scalar().mul(a.data(), b.data(), out.data(), 3);
  EXPECT_EQ(out, (std::vector<double>{4, 10, 18}));
  Scalar().mul_acc(a.data(), b.data(), out.data(), 3);
  EXPECT_EQ(out, (std::vector<double>{8, 20, 36}));
  Scalar().scale(2.0, a.data(), out.data(), 3);
  EXPECT_EQ(out, (std::vector<double>{2, 4, 6}));
  Scalar().axpy(-1.0, a.data(), out.data(), 3);
  EXPECT_EQ(out, (std::vector<double>{1, 2, 3}));
}

TEST(SimdKernels, BitIdenticalToScalar) {
  std::mt19937_64 gen(2);
  for (const KernelTable* simd : Variants()) {
    SCOPED_TRACE(std::string(simd->name));
    for (std::size_t n = 0; n <= 37; ++n) {
      auto a = Random(n, gen), b = Random(n, gen), y = Random(n, gen);
      std::vector<double> s(n), v(n);
      Scalar().add(a.data(), b.data(), s.data(), n);
      simd->add(a.data(), b.data(), v.data(), n);
      EXPECT_TRUE(BitEqual(s, v)) << "add n=" << n;
      Scalar().mul(a.data(), b.data(), s.data(), n);
      simd->mul(a.data(), b.data(), v.data(), n);
      EXPECT_TRUE(BitEqual(s, v)) << "mul n=" << n;
      s = y;
      v = y;
      Scalar().mul_acc(a.data(), b.data(), s.data(), n);
      simd->mul_acc(a.data(), b.data(), v.data(), n);
      EXPECT_TRUE(BitEqual(s, v)) << "mul_acc n=" << n;
      Scalar().scale(0.37, a.data(), s.data(), n);
      simd->scale(0.37, a.data(), v.data(), n);
      EXPECT_TRUE(BitEqual(s, v)) << "scale n=" << n;
      s = y;
      v = y;
      Scalar().axpy(-1.3, a.data(), s.data(), n);
      simd->axpy(-1.3, a.data(), v.data(), n);
      EXPECT_TRUE(BitEqual(s, v)) << "axpy n=" << n;
    }
    for (std::size_t m : {1, 2, 5}) {
      for (std::size_t k : {1, 3, 8, 17}) {
        for (std::size_t n : {1, 3, 4, 7, 8, 9, 31, 64, 65}) {
          auto a = Random(m * k, gen), b = Random(k * n, gen), c = Random(m * n, gen);
          auto c2 = c;
          Scalar().gemm_acc(a.data(), b.data(), c.data(), m, k, n);
          simd->gemm_acc(a.data(), b.data(), c2.data(), m, k, n);
          EXPECT_TRUE(BitEqual(c, c2)) << m << "x" << k << "x" << n;
        }
      }
    }
  }
}

TEST(Dispatch, ActiveIsAKnownVariant) {
  const auto name = Active().name;
  bool known = name == Scalar().name;
  for (const KernelTable* v : Variants()) known = known || name == v->name;
  EXPECT_TRUE(known) << name;
}

}  // namespace
}  // namespace rshd::kernels
