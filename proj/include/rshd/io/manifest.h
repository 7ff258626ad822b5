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

#ifndef RSHD_IO_MANIFEST_H_
#define RSHD_IO_MANIFEST_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rshd/synth/synthbench.h"

namespace rshd {

inline constexpr char kManifestFileName[] = "manifest.jsonl";

struct ManifestRecord {
  std::string id;
  // Relative to the manifest's directory.
  std::string path;
  std::size_t speaker = 0;
  std::optional<std::size_t> content;
  std::size_t t = 0;
  std::size_t d = 0;
  std::optional<Partition> partition;
};

// JSON lines: the first line is the header object ({"type": "header", ...},
// which must carry "seed" and "config_digest"), then one record per line.
struct Manifest {
  nlohmann::json header;
  std::vector<ManifestRecord> records;
};

std::string EncodeManifest(const Manifest& manifest);
// Checks structure and id uniqueness; `source` prefixes error messages.
Manifest DecodeManifest(std::string_view text, const std::string& source);

// `path` may name the manifest file or the directory holding it.
std::filesystem::path ResolveManifestPath(const std::filesystem::path& path);

// A manifest plus its feature matrices, loaded and shape-checked.
// utterances[i] corresponds to manifest.records[i]; records without a
// partition are treated as evaluation data and without content as class 0.
struct Corpus {
  std::filesystem::path dir;
  Manifest manifest;
  std::vector<Utterance> utterances;

  std::vector<const Utterance*> InPartition(Partition partition) const;
  bool HasContentLabels() const;
};

Corpus LoadCorpus(const std::filesystem::path& path);

// Writes <dir>/features/<id>.rshd and <dir>/manifest.jsonl. Ids must be
// non-empty and use only [A-Za-z0-9._-].
void SaveCorpus(const std::filesystem::path& dir, const nlohmann::json& header,
                const std::vector<Utterance>& utterances, bool force);

// Header for a generated dataset: synth config, standardization, seed and
// the config digest.
nlohmann::json DatasetHeader(const SynthDataset& dataset);

}  // namespace rshd

#endif  // RSHD_IO_MANIFEST_H_
