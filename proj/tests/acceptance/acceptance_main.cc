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

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: rshd_acceptance [workdir]

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "model_checks.h"
#include "rshd/cli/pipeline.h"
#include "rshd/common/rng.h"
#include "rshd/eval/eer.h"
#include "rshd/eval/pse_quality.h"
#include "rshd/io/checkpoint.h"
#include "rshd/io/files.h"
#include "rshd/io/manifest.h"
#include "rshd/io/saliency_io.h"
#include "rshd/saliency/smoothgrad.h"
#include "rshd/sanitizer/laplace.h"
#include "rshd/sanitizer/mask.h"
#include "rshd/sanitizer/sanitize.h"
#include "rshd/synth/synthbench.h"
#include "rshd/tensor/ops.h"
#include "stats.h"

namespace fs = std::filesystem;
using namespace rshd;

namespace {

// Pinned thresholds.
constexpr double kGradTolerance = 0.0;      // worst |a-n| minus (1e-6 + 1e-3 rel)
constexpr double kKsLimit = 0.01;
constexpr double kVarianceRelTol = 0.05;
constexpr double kMassRatioMin = 2.0;
constexpr double kChanceFloor = 0.2;        // Jaccard must reach 2x max(chance, this)
constexpr double kMidEpsilon = 2.0;
constexpr double kEerNoise = 0.01;          // one EER point
constexpr std::uint64_t kPipelineSeeds = 5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::string Fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void Report(int id, const char* name, double budget_s, const std::function<Outcome()>& run) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = Seconds(start);
  const bool in_budget = secs < budget_s;
  const bool pass = o.pass && in_budget;
  if (!pass) ++failures;
  std::printf("%s %d %s: %s [%.1f s of %.0f s]\n", pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), secs, budget_s);
  std::fflush(stdout);
}

Matrix RandomMatrix(std::size_t r, std::size_t c, std::mt19937_64& gen, double lo,
                    double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(r, c);
  for (double& v : m.data()) v = u(gen);
  return m;
}

// ---- 1 -------------------------------------------------------------------

Outcome GradientCorrectness() {
  using testing::GradCheckResult;
  const std::pair<const char*, GradCheckResult (*)(std::uint64_t)> models[] = {
      {"sid", testing::CheckSidGradients},
      {"pse", testing::CheckPseGradients},
      {"embedder", testing::CheckEmbedderGradients},
      {"classifier", testing::CheckClassifierGradients},
  };
  double worst = -std::numeric_limits<double>::infinity();
  std::string where;
  for (const auto& [name, check] : models) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const GradCheckResult r = check(seed);
      if (r.worst_excess > worst) {
        worst = r.worst_excess;
        where = std::string(name) + " seed " + std::to_string(seed) + " " + r.where;
      }
    }
  }
  return {worst <= kGradTolerance,
          Fmt("4 models x 20 seeds, worst excess over tolerance %.3g (%s)", worst,
              where.c_str())};
}

// ---- 2 -------------------------------------------------------------------

Outcome LaplaceMechanism() {
  bool ok = true;
  std::string detail;
  for (double eps : {4.0, 1.0}) {
    const double b = LaplaceScaleFor(1.0, eps);
    Rng rng = MakeStream(2026, static_cast<std::uint64_t>(eps));
    std::vector<double> xs(100000);
    for (double& x : xs) x = LaplaceSample(b, rng);
    const double ks =
        testing::KsStatistic(xs, [b](double x) { return testing::ReferenceLaplaceCdf(x, b); });
    const double var = testing::Variance(xs);
    const double rel = std::abs(var - 2 * b * b) / (2 * b * b);
    ok = ok && ks < kKsLimit && rel <= kVarianceRelTol;
    detail += Fmt("b=%.1f KS=%.4f var=%.4f (rel err %.3f); ", b, ks, var, rel);
  }
  return {ok, detail};
}

// ---- 3 -------------------------------------------------------------------

Outcome SanitizerExactness() {
  std::mt19937_64 gen(3);
  Rng init = MakeStream(3);
  bool ok = true;
  std::size_t checked = 0;
  std::string first_bad;
  for (auto [t, d] : {std::pair<std::size_t, std::size_t>{10, 8}, {33, 7}, {1, 768}}) {
    const Matrix x = RandomMatrix(t, d, gen, -3.0, 3.0);
    const PseModel pse(DeskPseConfig(d), init);
    for (std::uint64_t k = 0; k <= 100; ++k) {
      const std::size_t want = testing::ReferenceSelectionCount(t * d, k);
      for (SelectionMode mode : {SelectionMode::kPse, SelectionMode::kRandom}) {
        SanitizerConfig cfg;
        cfg.k_percent = static_cast<double>(k);
        cfg.eps_priv = 1.0;
        cfg.seed = 11;
        cfg.mode = mode;
        const PerturbationMask mask = SelectPositions(x, &pse, cfg, 0);
        const Matrix y = SanitizePipeline(x, &pse, cfg, 0);
        bool good = mask.count_selected() == want;
        if (k == 0) good = good && y.BitEquals(x);
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (!mask.at(i)) {
            good = good && std::bit_cast<std::uint64_t>(y.data()[i]) ==
                               std::bit_cast<std::uint64_t>(x.data()[i]);
          }
        }
        ++checked;
        if (!good && ok) first_bad = Fmt("%zux%zu k=%llu %s", t, d,
                                         static_cast<unsigned long long>(k),
                                         std::string(ModeName(mode)).c_str());
        ok = ok && good;
      }
    }
  }
  return {ok, Fmt("%zu (shape, k, mode) cases: cardinality, k=0 identity, unselected "
                  "bits unchanged%s%s",
                  checked, ok ? "" : "; first failure ", first_bad.c_str())};
}

// ---- 4 -------------------------------------------------------------------

double ExhaustiveEer(const std::vector<double>& g, const std::vector<double>& im) {
  std::set<double> unique(g.begin(), g.end());
  unique.insert(im.begin(), im.end());
  const std::vector<double> s(unique.begin(), unique.end());
  double best_gap = 2.0, eer = 0.0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    // Accept scores >= s[i]; i == s.size() accepts nothing.
    auto accepted = [&](double v) { return i < s.size() && v >= s[i]; };
    double fa = 0, fr = 0;
    for (double v : im) fa += accepted(v);
    for (double v : g) fr += !accepted(v);
    const double far = fa / im.size(), frr = fr / g.size();
    if (std::abs(far - frr) < best_gap) {
      best_gap = std::abs(far - frr);
      eer = (far + frr) / 2;
    }
  }
  return eer;
}

Outcome EerOracle() {
  std::size_t mismatches = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 gen(1000 + seed);
    std::uniform_int_distribution<std::size_t> n(1, 25);
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_int_distribution<int> level(0, 5);
    std::vector<double> g(n(gen)), im(n(gen));
    for (double& v : g) v = seed % 2 ? z(gen) + 1.0 : level(gen) + 1.0;
    for (double& v : im) v = seed % 2 ? z(gen) : level(gen);
    mismatches += ComputeEer(g, im).eer != ExhaustiveEer(g, im);
  }
  const std::vector<double> g = {0.9, 0.8, 0.75}, im = {0.1, 0.2};
  const double perfect = ComputeEer(g, im).eer;
  const std::vector<double> same = {0.4, 0.1, 0.4, 0.9};
  const double identical = ComputeEer(same, same).eer;
  return {mismatches == 0 && perfect == 0.0 && identical == 0.5,
          Fmt("%zu/100 oracle mismatches, separated=%g, identical=%g", mismatches, perfect,
              identical)};
}

// ---- 5 -------------------------------------------------------------------

Outcome SmoothGradDegeneracy() {
  std::mt19937_64 gen(5);
  std::size_t exact = 0, total = 0, negative = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng init = MakeStream(i);
    const SidModel model(PooledLinearConfig{32, 8}, init);
    const Matrix x = RandomMatrix(1 + i % 12, 32, gen, -2.0, 2.0);
    const std::size_t label = i % 8;
    const SaliencyMap s = SmoothGrad(model, x, label, {1, 0.0, i});
    const Tensor input(x, true);
    const Tensor targets[] = {input};
    Backward(CrossEntropy(model.Logits(input), label), targets);
    const Matrix grad = input.grad();
    for (std::size_t j = 0; j < x.size(); ++j) {
      exact += s.values().data()[j] == std::abs(grad.data()[j]);
      ++total;
    }
    const SaliencyMap noisy = SmoothGrad(model, x, label, {25, 0.1, i});
    for (double v : noisy.values().data()) negative += !(v >= 0.0);
  }
  return {exact == total && negative == 0,
          Fmt("%zu/%zu entries bit-equal to |grad|, %zu negative entries over 100 inputs",
              exact, total, negative)};
}

// ---- pipeline-backed criteria ---------------------------------------------

struct Cell {
  double eer = 0.0;
  double acc = 0.0;
};
// (mode, k, eps) -> cell
using Grid = std::map<std::tuple<std::string, double, double>, Cell>;

Grid ParseCsv(const fs::path& path) {
  std::istringstream in(ReadFileBytes(path));
  std::string line;
  std::getline(in, line);
  Grid grid;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string k, e, mode, eer, acc;
    std::getline(row, k, ',');
    std::getline(row, e, ',');
    std::getline(row, mode, ',');
    std::getline(row, eer, ',');
    std::getline(row, acc, ',');
    grid[{mode, std::stod(k), std::stod(e)}] = {std::stod(eer), std::stod(acc)};
  }
  return grid;
}

fs::path work_root;
std::vector<fs::path> seed_dirs;

const fs::path& PipelineDir(std::uint64_t seed) {
  if (seed_dirs.size() <= seed) seed_dirs.resize(seed + 1);
  if (seed_dirs[seed].empty()) {
    const fs::path dir = work_root / ("seed" + std::to_string(seed));
    fs::remove_all(dir);
    RunDefaultPipeline(dir, seed, false);
    seed_dirs[seed] = dir;
  }
  return seed_dirs[seed];
}

double LogChoose(double n, double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

// Mean Jaccard between a fixed a-subset and a uniform b-subset of n items.
double ExpectedJaccard(std::size_t n, std::size_t a, std::size_t b) {
  double total = 0.0;
  for (std::size_t j = 0; j <= std::min(a, b); ++j) {
    if (b - j > n - a) continue;
    const double logp = LogChoose(a, j) + LogChoose(n - a, b - j) - LogChoose(n, b);
    total += std::exp(logp) * static_cast<double>(j) / static_cast<double>(a + b - j);
  }
  return total;
}

Outcome OracleConcentration() {
  const fs::path& dir = PipelineDir(0);
  const SynthConfig synth;
  const SaliencyDataset sal = LoadSaliencyDataset(dir / "saliency");
  double on = 0, off = 0;
  std::size_t n_on = 0, n_off = 0;
  for (const SaliencyPair& p : sal.pairs) {
    const PerturbationMask oracle = OracleSensitiveMask(synth, p.x.rows(), p.x.cols());
    for (std::size_t i = 0; i < p.x.size(); ++i) {
      (oracle.at(i) ? on : off) += p.saliency.values().data()[i];
      ++(oracle.at(i) ? n_on : n_off);
    }
  }
  const double ratio = (on / n_on) / (off / n_off);

  // The PSE is scored on held-out verification speakers it never saw.
  const PseModel pse = PseFromCheckpoint(LoadCheckpoint(dir / "pse.ckpt"));
  const Corpus corpus = LoadCorpus(dir / "data");
  double jaccard = 0.0, chance = 0.0;
  const auto eval = corpus.InPartition(Partition::kAsvEval);
  for (const Utterance* u : eval) {
    const Matrix& x = u->features;
    const PerturbationMask oracle = OracleSensitiveMask(synth, x.rows(), x.cols());
    const PerturbationMask top = SelectTopK(pse.Estimate(x), 20.0);
    jaccard += top.Jaccard(oracle);
    chance += ExpectedJaccard(x.size(), top.count_selected(), oracle.count_selected());
  }
  jaccard /= eval.size();
  chance /= eval.size();
  const double need = 2.0 * std::max(chance, kChanceFloor);
  return {ratio >= kMassRatioMin && jaccard >= need,
          Fmt("saliency mass ratio %.3f (need >= %.1f); PSE top-20%% vs oracle Jaccard %.3f "
              "on %zu held-out utterances (chance %.3f, need >= %.3f)",
              ratio, kMassRatioMin, jaccard, eval.size(), chance, need)};
}

Outcome SaliencyBeatsRandom() {
  std::vector<double> pse, rnd, margin;
  std::string per_seed;
  for (std::uint64_t seed = 0; seed < kPipelineSeeds; ++seed) {
    const Grid g = ParseCsv(PipelineDir(seed) / "sweep.csv");
    pse.push_back(g.at({"pse", 20.0, kMidEpsilon}).eer);
    rnd.push_back(g.at({"random", 20.0, kMidEpsilon}).eer);
    margin.push_back(pse.back() - rnd.back());
    per_seed += Fmt(" %.3f/%.3f", pse.back(), rnd.back());
  }
  const double mean_margin = testing::Mean(margin);
  const double spread = std::max({testing::StdDev(pse), testing::StdDev(rnd),
                                  testing::StdDev(margin)});
  const bool every_seed = std::all_of(margin.begin(), margin.end(), [](double m) { return m > 0; });
  return {mean_margin > spread && every_seed,
          Fmt("k=20 eps=%.0f over %llu pipeline seeds: mean EER pse-random margin %.4f vs "
              "seed-to-seed std %.4f; pse/random per seed:%s",
              kMidEpsilon, static_cast<unsigned long long>(kPipelineSeeds), mean_margin,
              spread, per_seed.c_str())};
}

// Counts wrong-direction steps along one line of the grid. `sign` is +1 when
// the values should not decrease along the line.
struct LineCheck {
  int inversions = 0;
  double worst = 0.0;
};
LineCheck Line(const std::vector<double>& v, double sign) {
  LineCheck c;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double drop = sign * (v[i - 1] - v[i]);
    if (drop > 0) {
      ++c.inversions;
      c.worst = std::max(c.worst, drop);
    }
  }
  return c;
}

Outcome TradeoffMonotonicity() {
  const Grid g = ParseCsv(PipelineDir(0) / "sweep.csv");
  const double ks[] = {20, 40, 60, 80, 100}, eps[] = {0.5, 1, 2, 4, 8};
  int lines = 0, bad_lines = 0, total_inversions = 0;
  double worst = 0.0;
  std::string bad;
  auto check = [&](const std::vector<double>& v, double sign, const std::string& what) {
    const LineCheck c = Line(v, sign);
    ++lines;
    total_inversions += c.inversions;
    worst = std::max(worst, c.worst);
    if (c.inversions > 1 || c.worst > kEerNoise) {
      ++bad_lines;
      bad += Fmt(" [%s: %d inversions, worst %.3f]", what.c_str(), c.inversions, c.worst);
    }
  };
  for (const char* mode : {"pse", "random"}) {
    for (double e : eps) {
      std::vector<double> eer, acc;
      for (double k : ks) {
        eer.push_back(g.at({mode, k, e}).eer);
        acc.push_back(g.at({mode, k, e}).acc);
      }
      check(eer, +1, Fmt("%s eer eps=%g along k", mode, e));
      check(acc, -1, Fmt("%s acc eps=%g along k", mode, e));
    }
    for (double k : ks) {
      std::vector<double> eer, acc;
      for (double e : eps) {
        eer.push_back(g.at({mode, k, e}).eer);
        acc.push_back(g.at({mode, k, e}).acc);
      }
      check(eer, -1, Fmt("%s eer k=%g along eps", mode, k));
      check(acc, +1, Fmt("%s acc k=%g along eps", mode, k));
    }
  }
  return {bad_lines == 0,
          Fmt("%d lines (eer and accuracy, both modes), %d inversions in total, worst %.4f; "
              "allowed per line: one inversion of at most %.2f; %d lines out of bounds%s",
              lines, total_inversions, worst, kEerNoise, bad_lines, bad.c_str())};
}

Outcome EndToEndDeterminism() {
  const fs::path& a = PipelineDir(0);
  const fs::path b = work_root / "seed0_repeat";
  fs::remove_all(b);
  RunDefaultPipeline(b, 0, false);
  std::size_t files = 0, differ = 0;
  std::string first;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), a);
    ++files;
    if (!fs::exists(b / rel) || ReadFileBytes(entry.path()) != ReadFileBytes(b / rel)) {
      if (differ++ == 0) first = rel.string();
    }
  }
  const bool csv_same = ReadFileBytes(a / "sweep.csv") == ReadFileBytes(b / "sweep.csv");
  return {differ == 0 && csv_same && files > 0,
          Fmt("%zu files compared across two directories (sweep CSV, 4 checkpoints, data, "
              "saliency), %zu differ%s%s",
              files, differ, differ ? "; first: " : "", first.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  work_root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "rshd_acceptance";
  fs::create_directories(work_root);

  Report(1, "gradient correctness", 120, GradientCorrectness);
  Report(2, "laplace mechanism", 10, LaplaceMechanism);
  Report(3, "sanitizer exactness", 10, SanitizerExactness);
  Report(4, "eer oracle equivalence", 5, EerOracle);
  Report(5, "smoothgrad degeneracy", 30, SmoothGradDegeneracy);
  Report(6, "oracle concentration", 15 * 60, OracleConcentration);
  Report(7, "saliency beats random", 30 * 60, SaliencyBeatsRandom);
  Report(8, "trade-off monotonicity", 45 * 60, TradeoffMonotonicity);
  Report(9, "end-to-end determinism", 15 * 60, EndToEndDeterminism);

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
