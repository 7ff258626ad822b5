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

#if defined(__aarch64__)
#include <arm_neon.h>

namespace rshd::kernels {
namespace neon {
namespace {

// Multiply and add stay separate instructions to match scalar rounding.

void GemmAcc(const double* a, const double* b, double* c, std::size_t m,
             std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      const float64x2_t va = vdupq_n_f64(aip);
      const double* brow = b + p * n;
      std::size_t j = 0;
      for (; j + 2 <= n; j += 2) {
        const float64x2_t prod = vmulq_f64(va, vld1q_f64(brow + j));
        vst1q_f64(crow + j, vaddq_f64(vld1q_f64(crow + j), prod));
      }
      for (; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

void Axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t prod = vmulq_f64(va, vld1q_f64(x + i));
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void Add(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void Mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void MulAcc(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t prod = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    vst1q_f64(out + i, vaddq_f64(vld1q_f64(out + i), prod));
  }
  for (; i < n; ++i) out[i] += a[i] * b[i];
}

void Scale(double alpha, const double* x, double* out, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) out[i] = alpha * x[i];
}

}  // namespace

const KernelTable* Table() {
  static const KernelTable table{"neon", GemmAcc, Axpy, Add, Mul, MulAcc,
                                 Scale};
  return &table;
}

}  // namespace neon
}  // namespace rshd::kernels

#endif
