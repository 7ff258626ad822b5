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

#include "rshd/synth/synthbench.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "rshd/common/error.h"
#include "rshd/common/rng.h"

namespace rshd {
namespace {

constexpr std::uint64_t kGenerateTag = 21;
constexpr std::uint64_t kSplitTag = 22;

void CheckPositions(const std::vector<std::size_t>& positions, std::size_t d,
                    const char* what) {
  std::set<std::size_t> unique(positions.begin(), positions.end());
  if (unique.size() != positions.size()) {
    ThrowContract(std::string("synth: duplicate ") + what + " positions");
  }
  for (std::size_t p : positions) {
    if (p >= d) {
      ThrowContract(std::string("synth: ") + what + " position " + std::to_string(p) +
                    " outside d=" + std::to_string(d));
    }
  }
}

// Largest-remainder apportionment of n items.
std::vector<std::size_t> Apportion(std::size_t n, std::span<const double> fractions) {
  std::vector<std::size_t> counts(fractions.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double exact = fractions[i] * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    assigned += counts[i];
    remainders.emplace_back(exact - static_cast<double>(counts[i]), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < n && r < remainders.size(); ++r, ++assigned) {
    ++counts[remainders[r].second];
  }
  return counts;
}

}  // namespace

void SynthConfig::Validate() const {
  if (n_speakers < 4) ThrowContract("synth: n_speakers must be at least 4");
  if (utterances_per_speaker < 2) {
    ThrowContract("synth: utterances_per_speaker must be at least 2");
  }
  if (t_min == 0 || t_min > t_max) ThrowContract("synth: need 1 <= t_min <= t_max");
  if (d == 0) ThrowContract("synth: d must be positive");
  if (n_content_classes < 2) ThrowContract("synth: need at least 2 content classes");
  if (identity_strength < 0.0 || content_strength < 0.0 || !(noise_floor > 0.0)) {
    ThrowContract("synth: strengths must be >= 0 and noise_floor > 0");
  }
  if (!(sid_speaker_fraction > 0.0 && sid_speaker_fraction < 1.0) ||
      !(asv_train_fraction > 0.0 && asv_train_fraction < 1.0)) {
    ThrowContract("synth: partition fractions must lie in (0, 1)");
  }
  CheckPositions(identity_positions, d, "identity");
  CheckPositions(content_positions, d, "content");
  for (std::size_t p : identity_positions) {
    if (std::find(content_positions.begin(), content_positions.end(), p) !=
        content_positions.end()) {
      ThrowContract("synth: identity and content positions overlap at column " +
                    std::to_string(p));
    }
  }
}

std::string_view PartitionName(Partition partition) {
  switch (partition) {
    case Partition::kSid:
      return "sid";
    case Partition::kAsvTrain:
      return "asv-train";
    case Partition::kAsvEval:
      return "asv-eval";
  }
  return "sid";
}

Partition ParsePartition(std::string_view name) {
  if (name == "sid") return Partition::kSid;
  if (name == "asv-train") return Partition::kAsvTrain;
  if (name == "asv-eval") return Partition::kAsvEval;
  ThrowData("unknown partition '" + std::string(name) + "'");
}

Standardization Standardization::Fit(std::span<const Utterance> utterances,
                                     Partition fit_on) {
  std::size_t d = 0;
  for (const Utterance& u : utterances) {
    if (u.partition == fit_on) {
      d = u.features.cols();
      break;
    }
  }
  if (d == 0) ThrowData("standardization: no utterances in the fit partition");
  std::vector<double> sum(d, 0.0);
  std::size_t frames = 0;
  for (const Utterance& u : utterances) {
    if (u.partition != fit_on) continue;
    for (std::size_t r = 0; r < u.features.rows(); ++r) {
      for (std::size_t c = 0; c < d; ++c) sum[c] += u.features(r, c);
    }
    frames += u.features.rows();
  }
  Standardization stats;
  stats.mean.resize(d);
  for (std::size_t c = 0; c < d; ++c) stats.mean[c] = sum[c] / static_cast<double>(frames);
  std::vector<double> sq(d, 0.0);
  for (const Utterance& u : utterances) {
    if (u.partition != fit_on) continue;
    for (std::size_t r = 0; r < u.features.rows(); ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = u.features(r, c) - stats.mean[c];
        sq[c] += diff * diff;
      }
    }
  }
  stats.stddev.resize(d);
  for (std::size_t c = 0; c < d; ++c) {
    const double sd = std::sqrt(sq[c] / static_cast<double>(frames));
    stats.stddev[c] = sd > 0.0 ? sd : 1.0;
  }
  return stats;
}

void Standardization::Apply(FeatureMatrix& x) const {
  if (x.cols() != mean.size()) {
    ThrowDimension("standardize", x.rows(), x.cols(), x.rows(), mean.size());
  }
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) {
      x(r, c) = (x(r, c) - mean[c]) / stddev[c];
    }
  }
}

std::vector<const Utterance*> SynthDataset::InPartition(Partition partition) const {
  std::vector<const Utterance*> out;
  for (const Utterance& u : utterances) {
    if (u.partition == partition) out.push_back(&u);
  }
  return out;
}

SynthDataset Generate(const SynthConfig& cfg) {
  cfg.Validate();
  Rng rng = MakeStream(cfg.seed, 0, kGenerateTag);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> length(cfg.t_min, cfg.t_max);
  std::uniform_int_distribution<std::size_t> content(0, cfg.n_content_classes - 1);

  const std::size_t n_id = cfg.identity_positions.size();
  const std::size_t n_ct = cfg.content_positions.size();
  Matrix speaker_signatures(cfg.n_speakers, n_id);
  for (double& v : speaker_signatures.data()) v = normal(rng);
  Matrix content_signatures(cfg.n_content_classes, n_ct);
  for (double& v : content_signatures.data()) v = normal(rng);

  SynthDataset dataset;
  dataset.config = cfg;
  dataset.utterances.reserve(cfg.n_speakers * cfg.utterances_per_speaker);
  for (std::size_t s = 0; s < cfg.n_speakers; ++s) {
    for (std::size_t u = 0; u < cfg.utterances_per_speaker; ++u) {
      Utterance utt;
      char id[32];
      std::snprintf(id, sizeof(id), "spk%03zu-utt%03zu", s, u);
      utt.id = id;
      utt.speaker = s;
      utt.content = content(rng);
      const std::size_t t = length(rng);
      utt.features = FeatureMatrix(t, cfg.d);
      for (std::size_t r = 0; r < t; ++r) {
        for (std::size_t c = 0; c < cfg.d; ++c) {
          utt.features(r, c) = cfg.noise_floor * normal(rng);
        }
        for (std::size_t j = 0; j < n_id; ++j) {
          utt.features(r, cfg.identity_positions[j]) +=
              cfg.identity_strength * speaker_signatures(s, j);
        }
        for (std::size_t j = 0; j < n_ct; ++j) {
          utt.features(r, cfg.content_positions[j]) +=
              cfg.content_strength * content_signatures(utt.content, j);
        }
      }
      dataset.utterances.push_back(std::move(utt));
    }
  }

  std::vector<std::size_t> speakers;
  for (const Utterance& u : dataset.utterances) speakers.push_back(u.speaker);
  const std::vector<double> speaker_split = {cfg.sid_speaker_fraction,
                                             1.0 - cfg.sid_speaker_fraction};
  const auto by_speaker =
      Split(speakers, speaker_split, SplitMode::kSpeakerDisjoint, cfg.seed);
  std::vector<std::size_t> asv_indices = by_speaker[1];
  std::vector<std::size_t> asv_speakers;
  for (std::size_t i : asv_indices) asv_speakers.push_back(speakers[i]);
  const std::vector<double> asv_split = {cfg.asv_train_fraction,
                                         1.0 - cfg.asv_train_fraction};
  const auto by_utterance =
      Split(asv_speakers, asv_split, SplitMode::kUtterance, cfg.seed);
  for (std::size_t i : by_speaker[0]) dataset.utterances[i].partition = Partition::kSid;
  for (std::size_t j : by_utterance[0]) {
    dataset.utterances[asv_indices[j]].partition = Partition::kAsvTrain;
  }
  for (std::size_t j : by_utterance[1]) {
    dataset.utterances[asv_indices[j]].partition = Partition::kAsvEval;
  }

  dataset.standardization = Standardization::Fit(dataset.utterances, Partition::kSid);
  for (Utterance& u : dataset.utterances) dataset.standardization.Apply(u.features);
  return dataset;
}

PerturbationMask OracleSensitiveMask(const SynthConfig& cfg, std::size_t t,
                                     std::size_t d) {
  PerturbationMask mask(t, d);
  for (std::size_t r = 0; r < t; ++r) {
    for (std::size_t c : cfg.identity_positions) {
      if (c < d) mask.Set(r, c, true);
    }
  }
  return mask;
}

PerturbationMask ContentMask(const SynthConfig& cfg, std::size_t t, std::size_t d) {
  PerturbationMask mask(t, d);
  for (std::size_t r = 0; r < t; ++r) {
    for (std::size_t c : cfg.content_positions) {
      if (c < d) mask.Set(r, c, true);
    }
  }
  return mask;
}

std::vector<std::vector<std::size_t>> Split(std::span<const std::size_t> speakers,
                                            std::span<const double> fractions,
                                            SplitMode mode, std::uint64_t seed) {
  if (fractions.empty()) ThrowContract("split: no fractions");
  double total = 0.0;
  for (double f : fractions) {
    if (f < 0.0) ThrowContract("split: negative fraction");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    ThrowContract("split: fractions sum to " + std::to_string(total) + ", not 1");
  }
  Rng rng = MakeStream(seed, 0, kSplitTag);
  std::map<std::size_t, std::vector<std::size_t>> by_speaker;
  for (std::size_t i = 0; i < speakers.size(); ++i) by_speaker[speakers[i]].push_back(i);
  std::vector<std::vector<std::size_t>> parts(fractions.size());

  if (mode == SplitMode::kSpeakerDisjoint) {
    std::vector<std::size_t> ids;
    for (const auto& [s, members] : by_speaker) ids.push_back(s);
    std::shuffle(ids.begin(), ids.end(), rng);
    const auto counts = Apportion(ids.size(), fractions);
    std::size_t next = 0;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      for (std::size_t k = 0; k < counts[p]; ++k, ++next) {
        const auto& members = by_speaker[ids[next]];
        parts[p].insert(parts[p].end(), members.begin(), members.end());
      }
    }
  } else {
    for (auto& [s, members] : by_speaker) {
      std::shuffle(members.begin(), members.end(), rng);
      auto counts = Apportion(members.size(), fractions);
      // Keep the speaker in every partition with a positive share.
      for (std::size_t p = 0; p < counts.size(); ++p) {
        if (counts[p] > 0 || fractions[p] <= 0.0) continue;
        const auto largest = std::max_element(counts.begin(), counts.end());
        if (*largest > 1) {
          --*largest;
          ++counts[p];
        }
      }
      std::size_t next = 0;
      for (std::size_t p = 0; p < parts.size(); ++p) {
        for (std::size_t k = 0; k < counts[p]; ++k, ++next) parts[p].push_back(members[next]);
      }
    }
  }
  for (auto& part : parts) std::sort(part.begin(), part.end());
  return parts;
}

}  // namespace rshd
