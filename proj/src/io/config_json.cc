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

#include "rshd/io/config_json.h"

#include <initializer_list>
#include <string>
#include <type_traits>

#include "rshd/common/error.h"

namespace rshd {
namespace {

using nlohmann::json;

void RequireObject(const json& j, const char* what,
                   std::initializer_list<const char*> keys) {
  if (!j.is_object()) ThrowConfig(std::string(what) + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) ThrowConfig(std::string(what) + ": unknown key '" + key + "'");
  }
}

template <typename T>
void Read(const json& j, const char* what, const char* key, T& field) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if constexpr (std::is_unsigned_v<T>) {
    if (!it->is_number_unsigned()) {
      ThrowConfig(std::string(what) + "." + key + ": expected a non-negative integer");
    }
  }
  try {
    field = it->get<T>();
  } catch (const json::exception&) {
    ThrowConfig(std::string(what) + "." + key + ": wrong type");
  }
}

}  // namespace

void to_json(json& j, const SynthConfig& c) {
  j = json{{"n_speakers", c.n_speakers},
           {"utterances_per_speaker", c.utterances_per_speaker},
           {"t_min", c.t_min},
           {"t_max", c.t_max},
           {"d", c.d},
           {"identity_positions", c.identity_positions},
           {"content_positions", c.content_positions},
           {"n_content_classes", c.n_content_classes},
           {"identity_strength", c.identity_strength},
           {"content_strength", c.content_strength},
           {"noise_floor", c.noise_floor},
           {"sid_speaker_fraction", c.sid_speaker_fraction},
           {"asv_train_fraction", c.asv_train_fraction},
           {"seed", c.seed}};
}

void from_json(const json& j, SynthConfig& c) {
  const char* w = "synth";
  RequireObject(j, w,
                {"n_speakers", "utterances_per_speaker", "t_min", "t_max", "d",
                 "identity_positions", "content_positions", "n_content_classes",
                 "identity_strength", "content_strength", "noise_floor",
                 "sid_speaker_fraction", "asv_train_fraction", "seed"});
  Read(j, w, "n_speakers", c.n_speakers);
  Read(j, w, "utterances_per_speaker", c.utterances_per_speaker);
  Read(j, w, "t_min", c.t_min);
  Read(j, w, "t_max", c.t_max);
  Read(j, w, "d", c.d);
  Read(j, w, "identity_positions", c.identity_positions);
  Read(j, w, "content_positions", c.content_positions);
  Read(j, w, "n_content_classes", c.n_content_classes);
  Read(j, w, "identity_strength", c.identity_strength);
  Read(j, w, "content_strength", c.content_strength);
  Read(j, w, "noise_floor", c.noise_floor);
  Read(j, w, "sid_speaker_fraction", c.sid_speaker_fraction);
  Read(j, w, "asv_train_fraction", c.asv_train_fraction);
  Read(j, w, "seed", c.seed);
}

void to_json(json& j, const Standardization& s) {
  j = json{{"mean", s.mean}, {"stddev", s.stddev}};
}

void from_json(const json& j, Standardization& s) {
  RequireObject(j, "standardization", {"mean", "stddev"});
  Read(j, "standardization", "mean", s.mean);
  Read(j, "standardization", "stddev", s.stddev);
  if (s.mean.size() != s.stddev.size()) {
    ThrowConfig("standardization: mean and stddev lengths differ");
  }
}

void to_json(json& j, const SmoothGradConfig& c) {
  j = json{{"n_samples", c.n_samples}, {"sigma", c.sigma}, {"seed", c.seed}};
}

void from_json(const json& j, SmoothGradConfig& c) {
  RequireObject(j, "smoothgrad", {"n_samples", "sigma", "seed"});
  Read(j, "smoothgrad", "n_samples", c.n_samples);
  Read(j, "smoothgrad", "sigma", c.sigma);
  Read(j, "smoothgrad", "seed", c.seed);
}

void to_json(json& j, const TrainConfig& c) {
  j = json{{"lr", c.lr},
           {"batch_size", c.batch_size},
           {"epochs", c.epochs},
           {"dropout", c.dropout},
           {"seed", c.seed},
           {"validation_fraction", c.validation_fraction}};
}

void from_json(const json& j, TrainConfig& c) {
  const char* w = "train";
  RequireObject(j, w,
                {"lr", "batch_size", "epochs", "dropout", "seed",
                 "validation_fraction"});
  Read(j, w, "lr", c.lr);
  Read(j, w, "batch_size", c.batch_size);
  Read(j, w, "epochs", c.epochs);
  Read(j, w, "dropout", c.dropout);
  Read(j, w, "seed", c.seed);
  Read(j, w, "validation_fraction", c.validation_fraction);
}

void to_json(json& j, const PseConfig& c) {
  j = json{{"input_dim", c.input_dim}, {"model_dim", c.model_dim},
           {"num_layers", c.num_layers}, {"num_heads", c.num_heads},
           {"ff_dim", c.ff_dim},         {"dropout", c.dropout}};
}

void from_json(const json& j, PseConfig& c) {
  const char* w = "pse";
  RequireObject(j, w,
                {"input_dim", "model_dim", "num_layers", "num_heads", "ff_dim",
                 "dropout"});
  Read(j, w, "input_dim", c.input_dim);
  Read(j, w, "model_dim", c.model_dim);
  Read(j, w, "num_layers", c.num_layers);
  Read(j, w, "num_heads", c.num_heads);
  Read(j, w, "ff_dim", c.ff_dim);
  Read(j, w, "dropout", c.dropout);
}

void to_json(json& j, const EmbedderConfig& c) {
  j = json{{"input_dim", c.input_dim},
           {"hidden_dim", c.hidden_dim},
           {"embedding_dim", c.embedding_dim},
           {"num_classes", c.num_classes}};
}

void from_json(const json& j, EmbedderConfig& c) {
  const char* w = "embedder";
  RequireObject(j, w, {"input_dim", "hidden_dim", "embedding_dim", "num_classes"});
  Read(j, w, "input_dim", c.input_dim);
  Read(j, w, "hidden_dim", c.hidden_dim);
  Read(j, w, "embedding_dim", c.embedding_dim);
  Read(j, w, "num_classes", c.num_classes);
}

void to_json(json& j, const PooledLinearConfig& c) {
  j = json{{"input_dim", c.input_dim}, {"num_classes", c.num_classes}};
}

void from_json(const json& j, PooledLinearConfig& c) {
  RequireObject(j, "pooled", {"input_dim", "num_classes"});
  Read(j, "pooled", "input_dim", c.input_dim);
  Read(j, "pooled", "num_classes", c.num_classes);
}

void to_json(json& j, const SanitizerConfig& c) {
  j = json{{"k_percent", c.k_percent},
           {"epsilon", c.eps_priv},
           {"clip_bound", c.clip_bound},
           {"seed", c.seed},
           {"mode", std::string(ModeName(c.mode))}};
}

void from_json(const json& j, SanitizerConfig& c) {
  const char* w = "sanitizer";
  RequireObject(j, w, {"k_percent", "epsilon", "clip_bound", "seed", "mode"});
  Read(j, w, "k_percent", c.k_percent);
  Read(j, w, "epsilon", c.eps_priv);
  Read(j, w, "clip_bound", c.clip_bound);
  Read(j, w, "seed", c.seed);
  std::string mode(ModeName(c.mode));
  Read(j, w, "mode", mode);
  c.mode = ParseMode(mode);
}

void to_json(json& j, const SweepSpec& s) {
  json modes = json::array();
  for (SelectionMode m : s.modes) modes.push_back(std::string(ModeName(m)));
  j = json{{"k_list", s.k_list},         {"eps_list", s.eps_list},
           {"modes", modes},             {"clip_bound", s.clip_bound},
           {"seed", s.seed},             {"n_trials", s.n_trials},
           {"trial_seed", s.trial_seed}};
}

void from_json(const json& j, SweepSpec& s) {
  const char* w = "sweep";
  RequireObject(j, w,
                {"k_list", "eps_list", "modes", "clip_bound", "seed", "n_trials",
                 "trial_seed"});
  Read(j, w, "k_list", s.k_list);
  Read(j, w, "eps_list", s.eps_list);
  if (j.contains("modes")) {
    std::vector<std::string> names;
    Read(j, w, "modes", names);
    s.modes.clear();
    for (const auto& n : names) s.modes.push_back(ParseMode(n));
  }
  Read(j, w, "clip_bound", s.clip_bound);
  Read(j, w, "seed", s.seed);
  Read(j, w, "n_trials", s.n_trials);
  Read(j, w, "trial_seed", s.trial_seed);
}

json ParseJson(std::string_view text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    ThrowConfig(source + ": invalid JSON (" + e.what() + ")");
  }
}

}  // namespace rshd
