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

#include <cstdlib>
#include <string_view>

#include "rshd/kernels/kernels.h"

namespace rshd::kernels {

#if defined(__x86_64__) && defined(RSHD_HAVE_AVX2)
namespace avx2 {
const KernelTable* Table();
}
#endif
#if defined(__aarch64__)
namespace neon {
const KernelTable* Table();
}
#endif

const KernelTable* Avx2() {
#if defined(__x86_64__) && defined(RSHD_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) return avx2::Table();
#endif
  return nullptr;
}

const KernelTable* Neon() {
#if defined(__aarch64__)
  return neon::Table();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& Select() {
  const char* env = std::getenv("RSHD_KERNELS");
  const std::string_view requested = env != nullptr ? env : "";
  if (requested == "scalar") return Scalar();
  if (requested == "avx2" && Avx2() != nullptr) return *Avx2();
  if (requested == "neon" && Neon() != nullptr) return *Neon();
  if (const KernelTable* table = Avx2()) return *table;
  if (const KernelTable* table = Neon()) return *table;
  return Scalar();
}

}  // namespace

const KernelTable& Active() {
  static const KernelTable& table = Select();
  return table;
}

}  // namespace rshd::kernels
