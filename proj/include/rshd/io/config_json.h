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

#ifndef RSHD_IO_CONFIG_JSON_H_
#define RSHD_IO_CONFIG_JSON_H_

#include "json.hpp"
#include "rshd/eval/sweep.h"
#include "rshd/models/embedder.h"
#include "rshd/models/pooled.h"
#include "rshd/models/pse.h"
#include "rshd/models/train.h"
#include "rshd/saliency/smoothgrad.h"
#include "rshd/sanitizer/sanitize.h"
#include "rshd/synth/synthbench.h"

// JSON codecs for every configuration struct. Decoding overlays the keys that
// are present onto the target, so a partial object keeps the remaining
// defaults. Unknown keys and mistyped values raise config errors.
namespace rshd {

void to_json(nlohmann::json& j, const SynthConfig& c);
void from_json(const nlohmann::json& j, SynthConfig& c);
void to_json(nlohmann::json& j, const Standardization& s);
void from_json(const nlohmann::json& j, Standardization& s);
void to_json(nlohmann::json& j, const SmoothGradConfig& c);
void from_json(const nlohmann::json& j, SmoothGradConfig& c);
void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);
void to_json(nlohmann::json& j, const PseConfig& c);
void from_json(const nlohmann::json& j, PseConfig& c);
void to_json(nlohmann::json& j, const EmbedderConfig& c);
void from_json(const nlohmann::json& j, EmbedderConfig& c);
void to_json(nlohmann::json& j, const PooledLinearConfig& c);
void from_json(const nlohmann::json& j, PooledLinearConfig& c);
void to_json(nlohmann::json& j, const SanitizerConfig& c);
void from_json(const nlohmann::json& j, SanitizerConfig& c);
void to_json(nlohmann::json& j, const SweepSpec& s);
void from_json(const nlohmann::json& j, SweepSpec& s);

// Parses JSON text; syntax errors become config errors naming `source`.
nlohmann::json ParseJson(std::string_view text, const std::string& source);

}  // namespace rshd

#endif  // RSHD_IO_CONFIG_JSON_H_
