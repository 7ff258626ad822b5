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

#ifndef RSHD_COMMON_PARALLEL_H_
#define RSHD_COMMON_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace rshd {

// Worker cap: RSHD_NUM_WORKERS when set and positive, otherwise the
// hardware concurrency (at least 1).
std::size_t NumWorkers();

// Runs fn(i) for i in [0, n) over up to NumWorkers() threads. Each index
// runs exactly once. The first exception thrown by any call is rethrown
// after all workers join.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace rshd

#endif  // RSHD_COMMON_PARALLEL_H_
