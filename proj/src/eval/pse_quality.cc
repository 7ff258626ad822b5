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

#include "rshd/eval/pse_quality.h"

#include <cmath>
#include <vector>

#include "rshd/common/error.h"
#include "rshd/common/parallel.h"
#include "rshd/sanitizer/mask.h"

namespace rshd {
namespace {

double LogChoose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

double ChanceJaccard(std::size_t n, std::size_t m) {
  if (m > n) ThrowContract("chance_jaccard: m > n");
  if (m == 0 || m == n) return 1.0;
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  const double log_total = LogChoose(dn, dm);
  const std::size_t lo = 2 * m > n ? 2 * m - n : 0;
  double expectation = 0.0;
  for (std::size_t x = lo; x <= m; ++x) {
    const double dx = static_cast<double>(x);
    const double p =
        std::exp(LogChoose(dm, dx) + LogChoose(dn - dm, dm - dx) - log_total);
    expectation += p * dx / (2.0 * dm - dx);
  }
  return expectation;
}

PseQuality EvalPseQuality(const SaliencyEstimator& estimator,
                          const SaliencyDataset& dataset, double k_percent) {
  PseQuality quality;
  quality.k_percent = k_percent;
  quality.count = dataset.pairs.size();
  if (dataset.pairs.empty()) ThrowContract("eval_pse_quality: empty dataset");
  std::vector<double> jaccard(dataset.pairs.size()), l1(dataset.pairs.size()),
      chance(dataset.pairs.size());
  ParallelFor(dataset.pairs.size(), [&](std::size_t i) {
    const SaliencyPair& pair = dataset.pairs[i];
    const Matrix estimate = estimator(pair.x);
    const Matrix& truth = pair.saliency.values();
    if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
      ThrowDimension("eval_pse_quality", estimate.rows(), estimate.cols(), truth.rows(),
                     truth.cols());
    }
    jaccard[i] = SelectTopK(estimate, k_percent).Jaccard(SelectTopK(truth, k_percent));
    double err = 0.0;
    for (std::size_t j = 0; j < truth.size(); ++j) {
      err += std::abs(estimate.data()[j] - truth.data()[j]);
    }
    l1[i] = err / static_cast<double>(truth.size());
    chance[i] = ChanceJaccard(truth.size(), SelectionCount(truth.size(), k_percent));
  });
  const double n = static_cast<double>(dataset.pairs.size());
  for (std::size_t i = 0; i < dataset.pairs.size(); ++i) {
    quality.mean_jaccard += jaccard[i];
    quality.mean_l1 += l1[i];
    quality.chance_jaccard += chance[i];
  }
  quality.mean_jaccard /= n;
  quality.mean_l1 /= n;
  quality.chance_jaccard /= n;
  return quality;
}

PseQuality EvalPseQuality(const PseModel& pse, const SaliencyDataset& dataset,
                          double k_percent) {
  return EvalPseQuality([&pse](const FeatureMatrix& x) { return pse.Estimate(x); },
                        dataset, k_percent);
}

}  // namespace rshd
