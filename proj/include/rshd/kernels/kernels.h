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

#ifndef RSHD_KERNELS_KERNELS_H_
#define RSHD_KERNELS_KERNELS_H_

#include <cstddef>
#include <string_view>

// Dense double-precision inner loops used by the tensor ops.
//
// Every variant performs the same IEEE operations in the same order (separate
// multiply and add, no fused multiply-add, no reassociated reductions), so
// the scalar reference and the SIMD paths produce bit-identical results. The
// SIMD variants only vectorize across independent output elements.

namespace rshd::kernels {

struct KernelTable {
  std::string_view name;
  // c[m x n] += a[m x k] * b[k x n], row-major, loop order i-p-j.
  void (*gemm_acc)(const double* a, const double* b, double* c, std::size_t m,
                   std::size_t k, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[i] = a[i] + b[i]
  void (*add)(const double* a, const double* b, double* out, std::size_t n);
  // out[i] = a[i] * b[i]
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  // out[i] += a[i] * b[i]
  void (*mul_acc)(const double* a, const double* b, double* out,
                  std::size_t n);
  // out[i] = alpha * x[i]
  void (*scale)(double alpha, const double* x, double* out, std::size_t n);
};

const KernelTable& Scalar();

// nullptr when the variant is not compiled in or the CPU lacks it.
const KernelTable* Avx2();
const KernelTable* Neon();

// Table used by the tensor ops. Chosen once per process: the best supported
// SIMD variant, unless RSHD_KERNELS=scalar|avx2|neon asks for a specific one.
const KernelTable& Active();

}  // namespace rshd::kernels

#endif  // RSHD_KERNELS_KERNELS_H_
