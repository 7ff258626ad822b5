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

#ifndef RSHD_SANITIZER_LAPLACE_H_
#define RSHD_SANITIZER_LAPLACE_H_

#include "rshd/common/rng.h"

namespace rshd {

// Laplace(0, scale) by inverse CDF: u ~ U(-1/2, 1/2),
// x = -scale * sign(u) * ln(1 - 2|u|). Variance is 2 * scale^2.
double LaplaceSample(double scale, Rng& rng);

// Laplace CDF at x for location 0.
double LaplaceCdf(double x, double scale);

// Scale of the noise added after clipping to [-clip_bound, clip_bound]:
// the clip range width divided by the privacy parameter, i.e. 2/eps for the
// unit bound.
double LaplaceScaleFor(double clip_bound, double eps_priv);

}  // namespace rshd

#endif  // RSHD_SANITIZER_LAPLACE_H_
