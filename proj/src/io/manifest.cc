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

#include "rshd/io/manifest.h"

#include <set>
#include <sstream>

#include "rshd/common/error.h"
#include "rshd/io/config_json.h"
#include "rshd/io/digest.h"
#include "rshd/io/files.h"
#include "rshd/io/matrix_file.h"

namespace rshd {
namespace {

using nlohmann::json;

std::size_t GetSize(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number_unsigned()) {
    ThrowData(where + ": field '" + key + "' must be a non-negative integer");
  }
  return it->get<std::size_t>();
}

std::string GetString(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    ThrowData(where + ": field '" + key + "' must be a string");
  }
  return it->get<std::string>();
}

bool SafeId(std::string_view id) {
  if (id.empty() || id == "." || id == "..") return false;
  for (char c : id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

std::string EncodeManifest(const Manifest& manifest) {
  std::string out = manifest.header.dump();
  out.push_back('\n');
  for (const auto& r : manifest.records) {
    json j{{"id", r.id}, {"path", r.path}, {"speaker", r.speaker},
           {"t", r.t},   {"d", r.d}};
    if (r.content) j["content"] = *r.content;
    if (r.partition) j["partition"] = std::string(PartitionName(*r.partition));
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

Manifest DecodeManifest(std::string_view text, const std::string& source) {
  Manifest m;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string> ids;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      ThrowData(where + ": malformed JSON");
    }
    if (!j.is_object()) ThrowData(where + ": expected a JSON object");
    if (!have_header) {
      if (j.value("type", "") != "header") ThrowData(where + ": first line must be the header");
      if (!j.contains("seed") || !j.contains("config_digest")) {
        ThrowData(where + ": header lacks seed or config_digest");
      }
      m.header = std::move(j);
      have_header = true;
      continue;
    }
    ManifestRecord r;
    r.id = GetString(j, "id", where);
    r.path = GetString(j, "path", where);
    r.speaker = GetSize(j, "speaker", where);
    r.t = GetSize(j, "t", where);
    r.d = GetSize(j, "d", where);
    if (j.contains("content")) r.content = GetSize(j, "content", where);
    if (j.contains("partition")) {
      try {
        r.partition = ParsePartition(GetString(j, "partition", where));
      } catch (const Error& e) {
        ThrowData(where + ": " + e.what());
      }
    }
    if (r.t == 0 || r.d == 0) ThrowData(where + ": t and d must be positive");
    if (!ids.insert(r.id).second) ThrowData(where + ": duplicate id '" + r.id + "'");
    m.records.push_back(std::move(r));
  }
  if (!have_header) ThrowData(source + ": missing header");
  return m;
}

std::filesystem::path ResolveManifestPath(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) return path / kManifestFileName;
  return path;
}

std::vector<const Utterance*> Corpus::InPartition(Partition partition) const {
  std::vector<const Utterance*> out;
  for (const auto& u : utterances) {
    if (u.partition == partition) out.push_back(&u);
  }
  return out;
}

bool Corpus::HasContentLabels() const {
  for (const auto& r : manifest.records) {
    if (!r.content) return false;
  }
  return true;
}

Corpus LoadCorpus(const std::filesystem::path& path) {
  Corpus c;
  const auto file = ResolveManifestPath(path);
  c.dir = file.parent_path();
  c.manifest = DecodeManifest(ReadFileBytes(file), file.string());
  c.utterances.reserve(c.manifest.records.size());
  for (const auto& r : c.manifest.records) {
    const auto matrix_path = c.dir / r.path;
    if (!std::filesystem::exists(matrix_path)) {
      ThrowIo(file.string() + ": record '" + r.id + "' references missing file " +
              matrix_path.string());
    }
    Utterance u;
    u.id = r.id;
    u.features = LoadMatrix(matrix_path);
    if (u.features.rows() != r.t || u.features.cols() != r.d) {
      ThrowData(file.string() + ": record '" + r.id + "' declares " +
                std::to_string(r.t) + "x" + std::to_string(r.d) + " but file holds " +
                std::to_string(u.features.rows()) + "x" +
                std::to_string(u.features.cols()));
    }
    u.speaker = r.speaker;
    u.content = r.content.value_or(0);
    u.partition = r.partition.value_or(Partition::kAsvEval);
    c.utterances.push_back(std::move(u));
  }
  return c;
}

void SaveCorpus(const std::filesystem::path& dir, const nlohmann::json& header,
                const std::vector<Utterance>& utterances, bool force) {
  const auto manifest_path = dir / kManifestFileName;
  CheckWritable(manifest_path, force);
  Manifest m;
  m.header = header;
  std::set<std::string> ids;
  for (const auto& u : utterances) {
    if (!SafeId(u.id)) ThrowData("invalid utterance id '" + u.id + "'");
    if (!ids.insert(u.id).second) ThrowData("duplicate utterance id '" + u.id + "'");
    ManifestRecord r;
    r.id = u.id;
    r.path = "features/" + u.id + ".rshd";
    r.speaker = u.speaker;
    r.content = u.content;
    r.t = u.features.rows();
    r.d = u.features.cols();
    r.partition = u.partition;
    m.records.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    SaveMatrix(dir / m.records[i].path, utterances[i].features);
  }
  WriteFileAtomic(manifest_path, EncodeManifest(m));
}

nlohmann::json DatasetHeader(const SynthDataset& dataset) {
  json synth = dataset.config;
  return json{{"type", "header"},
              {"format", "rshd-dataset"},
              {"version", 1},
              {"synth", synth},
              {"standardization", dataset.standardization},
              {"seed", dataset.config.seed},
              {"config_digest", ConfigDigest(synth)}};
}

}  // namespace rshd
