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

#include <gtest/gtest.h>

#include <cmath>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rshd/common/rng.h"
#include "rshd/saliency/smoothgrad.h"
#include "rshd/tensor/ops.h"
#include "test_util.h"

namespace rshd {
namespace {

using testing::RandomMatrix;
using testing::ThrowsCategory;

constexpr std::size_t kDim = 12;
constexpr std::size_t kClasses = 5;

SidModel MakeModel(std::uint64_t seed) {
  Rng rng = MakeStream(seed);
  return SidModel(PooledLinearConfig{kDim, kClasses}, rng);
}

// d loss / d x for mean pooling + linear + softmax cross-entropy, written out
// by hand: every frame gets (1/t) * W (p - onehot).
Matrix AnalyticInputGradient(const SidModel& model, const Matrix& x, std::size_t label) {
  const auto params = model.Parameters();
  const Matrix& w = params[0].tensor.value();
  const Matrix& b = params[1].tensor.value();
  const std::size_t t = x.rows();
  std::vector<double> pooled(x.cols(), 0.0);
  for (std::size_t r = 0; r < t; ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) pooled[c] += x(r, c) / static_cast<double>(t);
  }
  std::vector<double> z(kClasses);
  double zmax = -INFINITY;
  for (std::size_t k = 0; k < kClasses; ++k) {
    z[k] = b(0, k);
    for (std::size_t c = 0; c < x.cols(); ++c) z[k] += pooled[c] * w(c, k);
    zmax = std::max(zmax, z[k]);
  }
  double norm = 0.0;
  for (double& v : z) norm += (v = std::exp(v - zmax));
  std::vector<double> delta(kClasses);
  for (std::size_t k = 0; k < kClasses; ++k) delta[k] = z[k] / norm - (k == label ? 1.0 : 0.0);
  Matrix grad(t, x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    double g = 0.0;
    for (std::size_t k = 0; k < kClasses; ++k) g += w(c, k) * delta[k];
    for (std::size_t r = 0; r < t; ++r) grad(r, c) = g / static_cast<double>(t);
  }
  return grad;
}

Matrix TapeInputGradient(const SidModel& model, const Matrix& x, std::size_t label) {
  const Tensor input(x, true);
  const Tensor loss = CrossEntropy(model.Logits(input), label);
  const Tensor targets[] = {input};
  Backward(loss, targets);
  return input.grad();
}

TEST(SmoothGrad, SingleNoiselessSampleIsAbsoluteGradient) {
  std::mt19937_64 gen(1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SidModel model = MakeModel(seed);
    const Matrix x = RandomMatrix(1 + seed % 7, kDim, gen, -2.0, 2.0);
    const std::size_t label = seed % kClasses;
    const SaliencyMap s = SmoothGrad(model, x, label, {1, 0.0, seed});
    const Matrix tape = TapeInputGradient(model, x, label);
    const Matrix analytic = AnalyticInputGradient(model, x, label);
    ASSERT_EQ(s.rows(), x.rows());
    ASSERT_EQ(s.cols(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_EQ(s.values().data()[i], std::abs(tape.data()[i]));
      EXPECT_NEAR(s.values().data()[i], std::abs(analytic.data()[i]), 1e-12);
    }
  }
}

TEST(SmoothGrad, MatchesBruteForceAverage) {
  std::mt19937_64 gen(2);
  const SidModel model = MakeModel(3);
  const Matrix x = RandomMatrix(6, kDim, gen);
  const SmoothGradConfig cfg{25, 0.3, 17};
  for (std::uint64_t stream : {0u, 4u}) {
    const SaliencyMap s = SmoothGrad(model, x, 2, cfg, stream);
    // Same noise draws, in the same order, as the implementation.
    Rng rng = MakeStream(cfg.seed, stream, 31);
    std::normal_distribution<double> noise(0.0, cfg.sigma);
    Matrix expected(x.rows(), x.cols());
    for (std::size_t j = 0; j < cfg.n_samples; ++j) {
      Matrix noisy = x;
      for (double& v : noisy.data()) v += noise(rng);
      const Matrix g = AnalyticInputGradient(model, noisy, 2);
      for (std::size_t i = 0; i < g.size(); ++i) expected.data()[i] += std::abs(g.data()[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_NEAR(s.values().data()[i], expected.data()[i] / 25.0, 1e-12);
    }
  }
}

TEST(SmoothGrad, NonNegativeOnRandomInputs) {
  std::mt19937_64 gen(3);
  const SidModel model = MakeModel(4);
  for (std::size_t i = 0; i < 100; ++i) {
    const Matrix x = RandomMatrix(1 + i % 9, kDim, gen, -3.0, 3.0);
    const SaliencyMap s = SmoothGrad(model, x, i % kClasses, {5, 0.2, i});
    for (double v : s.values().data()) {
      EXPECT_GE(v, 0.0);
      EXPECT_TRUE(std::isfinite(v));
    }
  }
}

TEST(SmoothGrad, DeterministicAndSeedSensitive) {
  std::mt19937_64 gen(4);
  const SidModel model = MakeModel(5);
  const Matrix x = RandomMatrix(4, kDim, gen);
  const SaliencyMap a = SmoothGrad(model, x, 1, {10, 0.5, 7});
  const SaliencyMap b = SmoothGrad(model, x, 1, {10, 0.5, 7});
  const SaliencyMap c = SmoothGrad(model, x, 1, {10, 0.5, 8});
  EXPECT_TRUE(a.values().BitEquals(b.values()));
  EXPECT_FALSE(a.values().BitEquals(c.values()));
}

TEST(SmoothGrad, Errors) {
  std::mt19937_64 gen(5);
  const SidModel model = MakeModel(6);
  const Matrix x = RandomMatrix(3, kDim, gen);
  EXPECT_TRUE(ThrowsCategory([&] { SmoothGrad(model, x, kClasses, {}); },
                             ErrorCategory::kContract));
  EXPECT_TRUE(ThrowsCategory([&] { SmoothGrad(model, x, 0, {0, 0.1, 0}); },
                             ErrorCategory::kConfig));
  EXPECT_TRUE(ThrowsCategory([&] { SmoothGrad(model, x, 0, {5, -0.1, 0}); },
                             ErrorCategory::kConfig));
  const Matrix wide = RandomMatrix(3, kDim + 1, gen);
  EXPECT_TRUE(ThrowsCategory([&] { SmoothGrad(model, wide, 0, {}); },
                             ErrorCategory::kDimension));
}

TEST(SaliencyMap, RejectsNegativeOrNonFinite) {
  Matrix m(2, 2);
  m(0, 1) = -1e-300;
  EXPECT_TRUE(ThrowsCategory([&] { SaliencyMap s(m); }, ErrorCategory::kData));
  m(0, 1) = NAN;
  EXPECT_TRUE(ThrowsCategory([&] { SaliencyMap s(m); }, ErrorCategory::kData));
}

TEST(BuildSaliencyDataset, OnePairPerInput) {
  std::mt19937_64 gen(6);
  const SidModel model = MakeModel(7);
  std::vector<Matrix> xs;
  for (std::size_t i = 0; i < 100; ++i) xs.push_back(RandomMatrix(2 + i % 5, kDim, gen));
  std::vector<LabeledFeatures> data;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    data.push_back({"u" + std::to_string(i), &xs[i], i % kClasses});
  }
  const SmoothGradConfig cfg{4, 0.1, 9};
  const SaliencyDataset ds = BuildSaliencyDataset(data, model, cfg, "abc");
  ASSERT_EQ(ds.pairs.size(), 100u);
  EXPECT_EQ(ds.provenance.sid_checkpoint, "abc");
  EXPECT_EQ(ds.provenance.smoothgrad.seed, 9u);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_EQ(ds.pairs[i].id, data[i].id);
    EXPECT_TRUE(ds.pairs[i].x.BitEquals(xs[i]));
    const SaliencyMap direct = SmoothGrad(model, xs[i], data[i].label, cfg, i);
    EXPECT_TRUE(ds.pairs[i].saliency.values().BitEquals(direct.values()));
  }
  const SaliencyDataset again = BuildSaliencyDataset(data, model, cfg, "abc");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_TRUE(again.pairs[i].saliency.values().BitEquals(ds.pairs[i].saliency.values()));
  }
}

TEST(BuildSaliencyDataset, EmptyInputWarns) {
  const SidModel model = MakeModel(8);
  std::ostringstream captured;
  std::streambuf* old = std::cerr.rdbuf(captured.rdbuf());
  const SaliencyDataset ds = BuildSaliencyDataset({}, model, SmoothGradConfig{});
  std::cerr.rdbuf(old);
  EXPECT_TRUE(ds.pairs.empty());
  EXPECT_NE(captured.str().find("warning"), std::string::npos);
}

TEST(BuildSaliencyDataset, BadLabelNamesSample) {
  std::mt19937_64 gen(7);
  const SidModel model = MakeModel(9);
  const Matrix x = RandomMatrix(3, kDim, gen);
  const LabeledFeatures data[] = {{"ok", &x, 0}, {"bad", &x, kClasses + 2}};
  try {
    BuildSaliencyDataset(data, model, SmoothGradConfig{});
    FAIL() << "expected a contract error";
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kContract);
    EXPECT_NE(std::string(e.what()).find("bad"), std::string::npos);
  }
}

}  // namespace
}  // namespace rshd
