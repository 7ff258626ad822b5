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

#ifndef RSHD_EVAL_EER_H_
#define RSHD_EVAL_EER_H_

#include <span>

namespace rshd {

struct EerResult {
  double eer = 0.0;        // in [0, 1]
  double threshold = 0.0;  // may be +/-infinity
  double far = 0.0;
  double frr = 0.0;
};

// Equal error rate by threshold enumeration. Candidates are -inf, +inf and
// the midpoints between consecutive distinct pooled scores. At threshold th,
// FAR = share of impostor scores >= th and FRR = share of genuine scores < th.
// The smallest threshold minimizing |FAR - FRR| wins and the EER is
// (FAR + FRR) / 2 there. Both lists must be non-empty.
EerResult ComputeEer(std::span<const double> genuine,
                     std::span<const double> impostor);

}  // namespace rshd

#endif  // RSHD_EVAL_EER_H_
