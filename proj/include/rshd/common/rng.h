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

#ifndef RSHD_COMMON_RNG_H_
#define RSHD_COMMON_RNG_H_

#include <cstdint>
#include <random>

namespace rshd {

using Rng = std::mt19937_64;

// Independent generator for (seed, stream, tag). Work indexed by `stream`
// draws the same numbers no matter which worker runs it or in which order.
Rng MakeStream(std::uint64_t seed, std::uint64_t stream = 0,
               std::uint64_t tag = 0);

}  // namespace rshd

#endif  // RSHD_COMMON_RNG_H_
